#include "fpsvqe/report.h"

#include <ostream>

#include "json.hpp"

namespace fpsvqe {

using nlohmann::json;

namespace {

json stats_json(const EnsembleStats &s) {
    return {{"min", s.min},           {"mean", s.mean},       {"stddev", s.stddev},
            {"reference", s.reference}, {"eps_min_percent", s.eps_min}, {"eps_avg_percent", s.eps_avg},
            {"runs", s.best_values.size()}};
}

std::string dump(const json &j) {
    return j.dump(2) + "\n";
}

class CsvPrecision {
   public:
    explicit CsvPrecision(std::ostream &out) : out_(out), old_(out.precision(17)) {
    }
    ~CsvPrecision() {
        out_.precision(old_);
    }

   private:
    std::ostream &out_;
    std::streamsize old_;
};

std::string counts_label(const KeptCounts &k) {
    std::string s = "(";
    for (size_t i = 0; i < k.size(); i++) {
        s += (i ? "," : "") + std::to_string(k[i]);
    }
    return s + ")";
}

}  // namespace

std::string reference_json(const Problem &problem, size_t levels) {
    auto spectrum = reference_spectrum(problem.matrix);
    json j;
    j["basis"] = counts_label(problem.basis.kept_counts);
    j["states"] = problem.basis.states;
    j["qubits"] = problem.basis.qubit_count;
    j["lambda1"] = problem.lambda_ref;
    j["rate_constant"] = rate_constant(problem.lambda_ref);
    std::vector<double> shown(spectrum.values.begin(),
                              spectrum.values.begin() + std::min(levels, spectrum.values.size()));
    j["spectrum"] = shown;
    json per = json::array();
    for (const auto &d : problem.basis.per_dihedral) {
        std::vector<double> ev;
        std::vector<int> par;
        for (size_t i = 0; i < d.n_kept(); i++) {
            ev.push_back(d.kept_eigenvalue(i));
            par.push_back(d.kept_parity(i));
        }
        per.push_back({{"potential", std::string(to_string(d.spec.kind))},
                       {"barrier", d.spec.barrier},
                       {"harmonics", d.harmonics},
                       {"eigenvalues", ev},
                       {"parities", par}});
    }
    j["dihedrals"] = per;
    return dump(j);
}

std::string resources_json(const ResourceReport &r) {
    return dump({{"basis_size", r.basis_size},
                 {"qubits", r.qubits},
                 {"nonzero_elements", r.nonzero_elements},
                 {"terms_generated", r.terms_generated},
                 {"terms_after_pruning", r.terms_after_pruning},
                 {"measurement_groups", r.measurement_groups}});
}

std::string vqe_json(const VqeRun &run, const Problem &problem) {
    return dump({{"run_index", run.run_index},
                 {"seed", run.seed},
                 {"lambda", run.lambda},
                 {"lambda_exact", run.lambda_exact},
                 {"lambda_ref", problem.lambda_ref},
                 {"rate_constant", run.rate},
                 {"evaluations", run.trace.evaluations},
                 {"termination", std::string(to_string(run.trace.termination))},
                 {"spsa_a", run.gains_used.a},
                 {"spsa_c", run.gains_used.c},
                 {"best_params", run.trace.best_params}});
}

std::string ensemble_json(const EnsembleResult &result, const ExperimentConfig &config) {
    json j = stats_json(result.stats);
    j["best_values"] = result.stats.best_values;
    j["config"] = to_key_values(config).values();
    return dump(j);
}

void write_ensemble_csv(std::ostream &out, const EnsembleResult &result) {
    CsvPrecision p(out);
    out << "run,seed,lambda,lambda_exact,rate_constant,evaluations\n";
    for (const auto &r : result.runs) {
        out << r.run_index << ',' << r.seed << ',' << r.lambda << ',' << r.lambda_exact << ',' << r.rate << ','
            << r.trace.evaluations << '\n';
    }
}

std::string barrier_scan_json(std::span<const BarrierScanRow> rows) {
    json j = json::array();
    for (const auto &r : rows) {
        json s = stats_json(r.stats);
        s["barrier"] = r.barrier;
        s["relative_spread"] = r.relative_spread;
        s["rate_constant_ref"] = rate_constant(r.reference);
        j.push_back(s);
    }
    return dump(j);
}

void write_barrier_scan_csv(std::ostream &out, std::span<const BarrierScanRow> rows) {
    CsvPrecision p(out);
    out << "barrier,reference,min,mean,stddev,relative_spread,eps_min_percent,eps_avg_percent\n";
    for (const auto &r : rows) {
        out << r.barrier << ',' << r.reference << ',' << r.stats.min << ',' << r.stats.mean << ',' << r.stats.stddev
            << ',' << r.relative_spread << ',' << r.stats.eps_min << ',' << r.stats.eps_avg << '\n';
    }
}

std::string qubit_scan_json(std::span<const QubitScanRow> rows) {
    json j = json::array();
    for (const auto &r : rows) {
        json s = stats_json(r.stats);
        s["basis"] = counts_label(r.kept);
        s["qubits"] = r.qubits;
        j.push_back(s);
    }
    return dump(j);
}

void write_qubit_scan_csv(std::ostream &out, std::span<const QubitScanRow> rows) {
    CsvPrecision p(out);
    out << "basis,qubits,reference,min,mean,stddev,eps_min_percent,eps_avg_percent\n";
    for (const auto &r : rows) {
        out << '"' << counts_label(r.kept) << "\"," << r.qubits << ',' << r.stats.reference << ',' << r.stats.min
            << ',' << r.stats.mean << ',' << r.stats.stddev << ',' << r.stats.eps_min << ',' << r.stats.eps_avg
            << '\n';
    }
}

std::string hierarchical_json(std::span<const HierarchicalRung> rungs) {
    json j = json::array();
    for (const auto &r : rungs) {
        json s = stats_json(r.stats);
        s["basis"] = counts_label(r.kept);
        s["qubits"] = r.qubits;
        s["embedding_error"] = r.embedding_error;
        j.push_back(s);
    }
    return dump(j);
}

void write_hierarchical_csv(std::ostream &out, std::span<const HierarchicalRung> rungs) {
    CsvPrecision p(out);
    out << "basis,qubits,reference,min,mean,eps_min_percent,eps_avg_percent,embedding_error\n";
    for (const auto &r : rungs) {
        out << '"' << counts_label(r.kept) << "\"," << r.qubits << ',' << r.reference << ',' << r.stats.min << ','
            << r.stats.mean << ',' << r.stats.eps_min << ',' << r.stats.eps_avg << ',' << r.embedding_error << '\n';
    }
}

std::string distribution_json(const DistributionStudy &study) {
    json j;
    j["exact_value"] = study.exact_value;
    json modes = json::array();
    for (const auto &s : study.samples) {
        modes.push_back({{"mode", std::string(to_string(s.mode))},
                         {"repetitions", s.values.size()},
                         {"mean", s.mean},
                         {"stddev", s.stddev},
                         {"min", s.min},
                         {"mean_std_error", s.mean_std_error}});
    }
    j["modes"] = modes;
    return dump(j);
}

void write_distribution_csv(std::ostream &out, const DistributionStudy &study) {
    CsvPrecision p(out);
    out << "mode,repetition,value\n";
    for (const auto &s : study.samples) {
        for (size_t i = 0; i < s.values.size(); i++) {
            out << to_string(s.mode) << ',' << i << ',' << s.values[i] << '\n';
        }
    }
}

}  // namespace fpsvqe
