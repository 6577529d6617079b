#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "fpsvqe/chain.h"
#include "fpsvqe/estimator.h"
#include "fpsvqe/optimize.h"
#include "fpsvqe/pauli.h"
#include "fpsvqe/statevector.h"

namespace fpsvqe {

enum class OptimizerKind { Spsa, NelderMead };
std::string_view to_string(OptimizerKind k);
OptimizerKind parse_optimizer_kind(std::string_view text);

/// How SPSA gains are chosen at the start of every run.
enum class GainMode {
    /// Calibrate `a` for a first step of 2π/10 rad with c fixed at 0.1, as VQE frameworks did by default.
    Framework,
    /// calibrate_spsa_gains with its default options.
    Calibrated,
    /// Use the configured a and c unchanged.
    Fixed,
};
std::string_view to_string(GainMode g);
GainMode parse_gain_mode(std::string_view text);

struct OptimizerConfig {
    OptimizerKind kind = OptimizerKind::Spsa;
    /// SPSA iterations, or Nelder-Mead evaluations.
    size_t budget = 600;
    SpsaConfig spsa;
    GainMode gains = GainMode::Framework;
    size_t calibration_trials = 25;
    NelderMeadConfig nelder_mead;
};

struct VqeConfig {
    ChainSpec chain = ChainSpec::rotor_chain(2, 0.5, 1.0);
    KeptCounts kept = {4, 2};
    /// Tier ladder the composite-state ordering is built against.
    std::vector<KeptCounts> ordering_ladder = rotor_chain_ladder();
    DihedralSolveOptions solve;
    size_t depth = 1;
    Entangler entangler = Entangler::Linear;
    EstimatorConfig estimator;
    OptimizerConfig optimizer;
    size_t restarts = 60;
    uint64_t seed = 1;
    /// Concurrent runs in ensembles; results never depend on it.
    size_t workers = 1;

    void validate() const;
};

/// Everything fixed by the chain and basis: the operator and its classical reference.
struct Problem {
    CompositeBasis basis;
    OperatorMatrix matrix;
    OperatorMatrix padded;
    PauliOperator op;
    double lambda_ref = 0;
    AnsatzSpec ansatz;
};

Problem build_problem(const VqeConfig &config);

struct VqeRun {
    uint64_t run_index = 0;
    uint64_t seed = 0;
    OptTrace trace;
    /// Best objective value seen (under the configured estimator).
    double lambda = 0;
    /// Exact expectation at the best parameters.
    double lambda_exact = 0;
    double rate = 0;
    SpsaConfig gains_used;
};

/// One optimization. Seeds derive from (config.seed, run_index); `start` overrides the
/// random initial point.
VqeRun run_vqe(const VqeConfig &config, const Problem &problem, uint64_t run_index, std::span<const double> start = {});
VqeRun run_vqe(const VqeConfig &config);

struct EnsembleStats {
    std::vector<double> best_values;
    double min = 0;
    double mean = 0;
    double stddev = 0;
    double reference = 0;
    double eps_min = 0;
    double eps_avg = 0;

    static EnsembleStats from(std::vector<double> values, double reference);
};

struct EnsembleResult {
    EnsembleStats stats;
    std::vector<VqeRun> runs;
};

/// `config.restarts` independent runs, aggregated in run order.
EnsembleResult run_ensemble(const VqeConfig &config);

struct BarrierScanRow {
    double barrier = 0;
    double reference = 0;
    EnsembleStats stats;
    /// stddev / mean of the ensemble.
    double relative_spread = 0;
};

/// One ensemble per reactive barrier; the other dihedrals keep their configured barriers.
std::vector<BarrierScanRow> run_barrier_scan(const VqeConfig &config, std::span<const double> barriers);

struct QubitScanRow {
    KeptCounts kept;
    size_t qubits = 0;
    EnsembleStats stats;
};

std::vector<QubitScanRow> run_qubit_scan(const VqeConfig &config, std::span<const KeptCounts> bases);

struct HierarchicalRung {
    KeptCounts kept;
    size_t qubits = 0;
    double reference = 0;
    EnsembleStats stats;
    /// Largest |f(embedded start) − previous rung best| over runs, exact expectations.
    double embedding_error = 0;
    std::vector<std::vector<double>> best_params;
};

/// For every restart: optimize on the first rung, embed the best parameters one qubit
/// up, continue, and so on. Throws std::invalid_argument if a rung's state list is not
/// a prefix of the next one.
std::vector<HierarchicalRung> run_hierarchical(const VqeConfig &config, std::span<const KeptCounts> ladder);

struct DistributionSample {
    EstimateMode mode = EstimateMode::Sampled;
    std::vector<double> values;
    double mean = 0;
    double stddev = 0;
    double min = 0;
    double mean_std_error = 0;
};

struct DistributionStudy {
    double exact_value = 0;
    std::vector<DistributionSample> samples;
};

/// Repeated estimation at fixed parameters, one value list per mode. Noise settings come
/// from `config.estimator`.
DistributionStudy run_distribution_study(
    const VqeConfig &config,
    std::span<const double> params,
    std::span<const EstimateMode> modes,
    size_t repetitions,
    uint64_t shots);

}  // namespace fpsvqe
