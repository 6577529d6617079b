#include "fpsvqe/driver.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace fpsvqe {

std::string_view to_string(OptimizerKind k) {
    return k == OptimizerKind::Spsa ? "spsa" : "nelder-mead";
}

OptimizerKind parse_optimizer_kind(std::string_view text) {
    if (text == "spsa") {
        return OptimizerKind::Spsa;
    }
    if (text == "nelder-mead" || text == "nm" || text == "simplex") {
        return OptimizerKind::NelderMead;
    }
    throw std::invalid_argument("unknown optimizer '" + std::string(text) + "' (spsa, nelder-mead)");
}

std::string_view to_string(GainMode g) {
    switch (g) {
        case GainMode::Framework:
            return "framework";
        case GainMode::Calibrated:
            return "calibrated";
        case GainMode::Fixed:
            return "fixed";
    }
    return "unknown";
}

GainMode parse_gain_mode(std::string_view text) {
    if (text == "framework") {
        return GainMode::Framework;
    }
    if (text == "calibrated") {
        return GainMode::Calibrated;
    }
    if (text == "fixed") {
        return GainMode::Fixed;
    }
    throw std::invalid_argument("unknown SPSA gain mode '" + std::string(text) + "' (framework, calibrated, fixed)");
}

void VqeConfig::validate() const {
    chain.validate();
    if (kept.size() != chain.num_dihedrals()) {
        throw std::invalid_argument(
            "config: basis has " + std::to_string(kept.size()) + " kept counts for " +
            std::to_string(chain.num_dihedrals()) + " dihedrals");
    }
    if (estimator.mode != EstimateMode::Exact && estimator.shots == 0) {
        throw std::invalid_argument("config: shots must be >= 1");
    }
    if (estimator.mode == EstimateMode::Noisy) {
        estimator.noise.validate();
    }
    if (restarts < 1) {
        throw std::invalid_argument("config: restarts must be >= 1");
    }
    if (workers < 1) {
        throw std::invalid_argument("config: workers must be >= 1");
    }
    if (optimizer.kind == OptimizerKind::Spsa && optimizer.gains == GainMode::Fixed) {
        optimizer.spsa.validate();
    }
    if (optimizer.gains != GainMode::Fixed && optimizer.calibration_trials < 1) {
        throw std::invalid_argument("config: calibration trials must be >= 1");
    }
}

Problem build_problem(const VqeConfig &config) {
    config.validate();
    Problem p;
    p.basis = build_composite_basis(config.chain, config.kept, config.solve, config.ordering_ladder);
    p.matrix = build_chain_matrix(p.basis);
    p.padded = pad_to_register(p.matrix, p.basis.qubit_count);
    p.op = map_operator(p.padded);
    p.lambda_ref = reference_spectrum(p.matrix).values[0];
    p.ansatz = AnsatzSpec{p.basis.qubit_count, config.depth, config.entangler};
    return p;
}

namespace {

/// Runs task(i) for i in [0, count) on up to `workers` threads. The first exception is rethrown.
template <class Task>
void parallel_for(size_t count, size_t workers, Task &&task) {
    workers = std::max<size_t>(1, std::min(workers, count));
    if (workers == 1) {
        for (size_t i = 0; i < count; i++) {
            task(i);
        }
        return;
    }
    std::atomic<size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (size_t w = 0; w < workers; w++) {
        pool.emplace_back([&] {
            for (size_t i; (i = next.fetch_add(1)) < count;) {
                try {
                    task(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) {
                        error = std::current_exception();
                    }
                    next = count;
                }
            }
        });
    }
    for (auto &t : pool) {
        t.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

}  // namespace

VqeRun run_vqe(const VqeConfig &config, const Problem &problem, uint64_t run_index, std::span<const double> start) {
    VqeRun run;
    run.run_index = run_index;
    run.seed = derive_seed(config.seed, run_index);

    ExpectationEvaluator evaluator(problem.ansatz, problem.op, config.estimator);
    Rng eval_rng = make_rng(derive_seed(run.seed, 1));

    ObjectiveSpec obj;
    obj.dimension = problem.ansatz.parameter_count();
    obj.budget = config.optimizer.budget;
    obj.seed = derive_seed(run.seed, 2);
    obj.evaluate = [&](std::span<const double> x) {
        auto e = evaluator.evaluate(x, eval_rng);
        return Evaluation{e.value, e.std_error};
    };
    if (!start.empty()) {
        if (start.size() != obj.dimension) {
            throw std::invalid_argument(
                "run_vqe: start point has " + std::to_string(start.size()) + " parameters, ansatz needs " +
                std::to_string(obj.dimension));
        }
        obj.start.assign(start.begin(), start.end());
    } else {
        obj.start = obj.initial_point();
    }

    const auto &opt = config.optimizer;
    if (opt.kind == OptimizerKind::Spsa) {
        SpsaConfig gains = opt.spsa;
        if (opt.gains == GainMode::Framework) {
            CalibrationOptions c;
            c.target_step = 2 * std::numbers::pi / 10;
            c.fixed_perturbation = 0.1;
            gains = calibrate_spsa_gains(obj, opt.calibration_trials, gains, c);
        } else if (opt.gains == GainMode::Calibrated) {
            gains = calibrate_spsa_gains(obj, opt.calibration_trials, gains);
        }
        run.gains_used = gains;
        run.trace = spsa_minimize(obj, gains);
    } else {
        run.trace = nelder_mead_minimize(obj, opt.nelder_mead);
    }
    run.lambda = run.trace.best_value;
    run.lambda_exact = evaluator.exact(run.trace.best_params);
    run.rate = run.lambda >= 0 ? rate_constant(run.lambda) : std::numeric_limits<double>::quiet_NaN();
    return run;
}

VqeRun run_vqe(const VqeConfig &config) {
    return run_vqe(config, build_problem(config), 0);
}

EnsembleStats EnsembleStats::from(std::vector<double> values, double reference) {
    if (values.empty()) {
        throw std::invalid_argument("EnsembleStats: no values");
    }
    EnsembleStats s;
    s.best_values = std::move(values);
    s.reference = reference;
    const auto &v = s.best_values;
    s.min = *std::min_element(v.begin(), v.end());
    s.mean = std::accumulate(v.begin(), v.end(), 0.0) / double(v.size());
    double ss = 0;
    for (double x : v) {
        ss += (x - s.mean) * (x - s.mean);
    }
    s.stddev = v.size() > 1 ? std::sqrt(ss / double(v.size() - 1)) : 0.0;
    s.eps_min = 100 * (s.min - reference) / reference;
    s.eps_avg = 100 * (s.mean - reference) / reference;
    return s;
}

EnsembleResult run_ensemble(const VqeConfig &config) {
    Problem problem = build_problem(config);
    EnsembleResult out;
    out.runs.resize(config.restarts);
    parallel_for(config.restarts, config.workers, [&](size_t i) { out.runs[i] = run_vqe(config, problem, i); });
    std::vector<double> values;
    for (const auto &r : out.runs) {
        values.push_back(r.lambda);
    }
    out.stats = EnsembleStats::from(std::move(values), problem.lambda_ref);
    return out;
}

std::vector<BarrierScanRow> run_barrier_scan(const VqeConfig &config, std::span<const double> barriers) {
    if (barriers.empty()) {
        throw std::invalid_argument("run_barrier_scan: no barriers given");
    }
    std::vector<BarrierScanRow> rows;
    for (double b : barriers) {
        VqeConfig c = config;
        bool any = false;
        for (auto &d : c.chain.dihedrals) {
            if (d.kind == PotentialKind::BiStable) {
                d.barrier = b;
                any = true;
            }
        }
        if (!any) {
            throw std::invalid_argument("run_barrier_scan: chain has no bistable (reactive) dihedral");
        }
        auto ens = run_ensemble(c);
        BarrierScanRow row;
        row.barrier = b;
        row.reference = ens.stats.reference;
        row.stats = std::move(ens.stats);
        row.relative_spread = row.stats.stddev / row.stats.mean;
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<QubitScanRow> run_qubit_scan(const VqeConfig &config, std::span<const KeptCounts> bases) {
    if (bases.empty()) {
        throw std::invalid_argument("run_qubit_scan: no bases given");
    }
    std::vector<QubitScanRow> rows;
    for (const auto &kept : bases) {
        VqeConfig c = config;
        c.kept = kept;
        auto ens = run_ensemble(c);
        rows.push_back({kept, build_composite_basis(c.chain, kept, c.solve, c.ordering_ladder).qubit_count,
                        std::move(ens.stats)});
    }
    return rows;
}

std::vector<HierarchicalRung> run_hierarchical(const VqeConfig &config, std::span<const KeptCounts> ladder) {
    if (ladder.empty()) {
        throw std::invalid_argument("run_hierarchical: empty ladder");
    }
    std::vector<Problem> problems;
    for (const auto &kept : ladder) {
        VqeConfig c = config;
        c.kept = kept;
        problems.push_back(build_problem(c));
    }
    for (size_t r = 1; r < problems.size(); r++) {
        const auto &small = problems[r - 1].basis.states;
        const auto &big = problems[r].basis.states;
        if (big.size() < small.size() || !std::equal(small.begin(), small.end(), big.begin())) {
            throw std::invalid_argument("run_hierarchical: rung " + std::to_string(r - 1) + " is not a prefix of rung " +
                                        std::to_string(r));
        }
        if (problems[r].ansatz.num_qubits != problems[r - 1].ansatz.num_qubits + 1) {
            throw std::invalid_argument("run_hierarchical: consecutive rungs must differ by exactly one qubit");
        }
    }

    const size_t runs = config.restarts;
    std::vector<std::vector<VqeRun>> results(runs);
    std::vector<std::vector<double>> embed_errors(runs);
    parallel_for(runs, config.workers, [&](size_t i) {
        std::vector<double> start;
        for (size_t r = 0; r < problems.size(); r++) {
            VqeConfig c = config;
            c.kept = ladder[r];
            c.seed = derive_seed(config.seed, r);
            if (r > 0) {
                const auto &prev = results[i].back();
                start = embed_parameters(problems[r - 1].ansatz, prev.trace.best_params);
                double embedded = exact_expectation(prepare_state(problems[r].ansatz, start), problems[r].op);
                embed_errors[i].push_back(std::abs(embedded - prev.lambda_exact));
            }
            results[i].push_back(run_vqe(c, problems[r], i, start));
        }
    });

    std::vector<HierarchicalRung> rungs;
    for (size_t r = 0; r < problems.size(); r++) {
        HierarchicalRung rung;
        rung.kept = ladder[r];
        rung.qubits = problems[r].ansatz.num_qubits;
        rung.reference = problems[r].lambda_ref;
        std::vector<double> values;
        for (size_t i = 0; i < runs; i++) {
            values.push_back(results[i][r].lambda);
            rung.best_params.push_back(results[i][r].trace.best_params);
            if (r > 0) {
                rung.embedding_error = std::max(rung.embedding_error, embed_errors[i][r - 1]);
            }
        }
        rung.stats = EnsembleStats::from(std::move(values), rung.reference);
        rungs.push_back(std::move(rung));
    }
    return rungs;
}

DistributionStudy run_distribution_study(
    const VqeConfig &config,
    std::span<const double> params,
    std::span<const EstimateMode> modes,
    size_t repetitions,
    uint64_t shots) {
    if (repetitions < 1) {
        throw std::invalid_argument("run_distribution_study: repetitions must be >= 1");
    }
    Problem problem = build_problem(config);
    if (params.size() != problem.ansatz.parameter_count()) {
        throw std::invalid_argument(
            "run_distribution_study: " + std::to_string(params.size()) + " parameters given, ansatz needs " +
            std::to_string(problem.ansatz.parameter_count()));
    }
    DistributionStudy study;
    study.exact_value = exact_expectation(prepare_state(problem.ansatz, params), problem.op);
    for (size_t m = 0; m < modes.size(); m++) {
        EstimatorConfig ec = config.estimator;
        ec.mode = modes[m];
        ec.shots = shots;
        ExpectationEvaluator evaluator(problem.ansatz, problem.op, ec);
        DistributionSample sample;
        sample.mode = modes[m];
        sample.values.resize(repetitions);
        uint64_t mode_seed = derive_seed(config.seed, 1000 + uint64_t(modes[m]));
        parallel_for(repetitions, config.workers, [&](size_t i) {
            Rng rng = make_rng(derive_seed(mode_seed, i));
            sample.values[i] = evaluator.evaluate(params, rng).value;
        });
        auto stats = EnsembleStats::from(sample.values, study.exact_value);
        sample.mean = stats.mean;
        sample.stddev = stats.stddev;
        sample.min = stats.min;
        sample.mean_std_error = stats.stddev / std::sqrt(double(repetitions));
        study.samples.push_back(std::move(sample));
    }
    return study;
}

}  // namespace fpsvqe
