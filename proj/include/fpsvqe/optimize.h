#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

namespace fpsvqe {

struct Evaluation {
    double value = 0;
    double std_error = 0;
};

/// What an optimizer minimizes. `evaluate` may be stochastic; it owns its own randomness,
/// so a freshly built objective with the same seed replays identically.
struct ObjectiveSpec {
    std::function<Evaluation(std::span<const double>)> evaluate;
    size_t dimension = 0;
    /// SPSA: iterations. Nelder-Mead: objective evaluations.
    size_t budget = 600;
    /// Drives the optimizer's own random choices, and the start point when `start` is empty.
    uint64_t seed = 0;
    /// Empty: uniform in [0, 2π) per coordinate.
    std::vector<double> start;

    void validate() const;
    std::vector<double> initial_point() const;
};

enum class Termination { Budget, Converged };
std::string_view to_string(Termination t);

struct TraceRecord {
    size_t iteration = 0;
    /// Cumulative objective calls when this record was taken.
    size_t evaluations = 0;
    double value = 0;
    std::vector<double> params;
};

struct OptTrace {
    std::vector<TraceRecord> records;
    std::vector<double> best_params;
    double best_value = 0;
    size_t evaluations = 0;
    Termination termination = Termination::Budget;

    /// Running minimum of the recorded values.
    std::vector<double> running_best() const;
    /// Evaluations spent when a recorded value first came within `threshold`; npos if never.
    size_t evaluations_to_reach(double threshold) const;
};

void write_trace_csv(std::ostream &out, const OptTrace &trace);

struct SpsaConfig {
    double a = 0.2;
    double c = 0.1;
    double A = 0;
    double alpha = 0.602;
    double gamma = 0.101;

    void validate() const;
    double step_gain(size_t k) const;
    double perturbation_gain(size_t k) const;
};

/// Each iteration spends two evaluations on the gradient estimate and one on recording
/// the new iterate.
OptTrace spsa_minimize(const ObjectiveSpec &obj, const SpsaConfig &config = {});

struct CalibrationOptions {
    /// Desired magnitude of the first update per coordinate, in radians.
    double target_step = 0.1;
    double min_perturbation = 0.01;
    /// Positive: use this c instead of the standard-error rule.
    double fixed_perturbation = 0;
};

/// Picks `a` so that the first SPSA step has the target magnitude, averaged over
/// `trials` gradient estimates at the start point, and sets c to the objective's
/// standard error there with a floor. Other fields come from `base`.
SpsaConfig calibrate_spsa_gains(
    const ObjectiveSpec &obj, size_t trials, const SpsaConfig &base = {}, const CalibrationOptions &options = {});

struct NelderMeadConfig {
    double initial_step = 0.1;
    double reflection = 1.0;
    double expansion = 2.0;
    double contraction = 0.5;
    double shrink = 0.5;
    double diameter_tolerance = 1e-6;
};

OptTrace nelder_mead_minimize(const ObjectiveSpec &obj, const NelderMeadConfig &config = {});

}  // namespace fpsvqe
