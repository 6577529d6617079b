#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "fpsvqe/pauli.h"
#include "fpsvqe/random.h"
#include "fpsvqe/statevector.h"

namespace fpsvqe {

/// Per-qubit readout error. confusion()[true][measured] = P(measured | true).
struct ReadoutError {
    double p1_given0 = 0;
    double p0_given1 = 0;

    std::array<std::array<double, 2>, 2> confusion() const {
        return {{{1 - p1_given0, p1_given0}, {p0_given1, 1 - p0_given1}}};
    }
};

/// Parametric device noise: depolarizing errors after each gate and readout flips.
struct NoiseSpec {
    /// Probability of a uniformly random non-identity Pauli after each single-qubit gate.
    double p1 = 0;
    /// Probability of a uniformly random non-identity two-qubit Pauli after each CNOT.
    double p2 = 0;
    /// Empty: ideal readout. One entry: applied to every qubit. Otherwise one per qubit.
    std::vector<ReadoutError> readout;
    uint64_t seed = 0;

    /// Magnitudes typical of a 2021 five-qubit superconducting device.
    static NoiseSpec santiago_like();
    void validate() const;
    ReadoutError readout_for(size_t qubit) const;
};

enum class EstimateMode { Exact, Sampled, Noisy };
std::string_view to_string(EstimateMode mode);

struct ExpectationEstimate {
    double value = 0;
    double std_error = 0;
    uint64_t shots_used = 0;
    EstimateMode mode = EstimateMode::Exact;
};

/// Σ_j γ_j ⟨ψ|P_j|ψ⟩; the imaginary residue is discarded.
double exact_expectation(const StateVector &state, const PauliOperator &op);

/// Exact expectation evaluated group by group in each group's rotated measurement basis.
double grouped_exact_expectation(const StateVector &state, const std::vector<MeasurementGroup> &groups);

struct EstimatorConfig {
    EstimateMode mode = EstimateMode::Exact;
    uint64_t shots = 20000;
    /// Measure qubit-wise commuting groups together instead of one string per circuit.
    bool grouping = false;
    NoiseSpec noise = NoiseSpec::santiago_like();
    bool mitigate_readout = true;
};

/// Evaluates ⟨Γ⟩ for ansatz parameters. Measurement settings are prepared once.
class ExpectationEvaluator {
   public:
    ExpectationEvaluator(AnsatzSpec ansatz, PauliOperator op, EstimatorConfig config);

    ExpectationEstimate evaluate(std::span<const double> params, Rng &rng) const;
    double exact(std::span<const double> params) const;

    const AnsatzSpec &ansatz() const {
        return ansatz_;
    }
    const PauliOperator &op() const {
        return op_;
    }
    const EstimatorConfig &config() const {
        return config_;
    }
    size_t setting_count() const {
        return settings_.size();
    }

   private:
    struct Setting {
        PauliString basis;
        std::vector<std::pair<uint64_t, double>> terms;  // (support mask, real coefficient)
    };

    ExpectationEstimate sampled(std::span<const double> params, Rng &rng) const;
    ExpectationEstimate noisy(std::span<const double> params, Rng &rng) const;
    std::vector<double> measured_histogram(const Circuit &circuit, Rng &rng) const;

    AnsatzSpec ansatz_;
    PauliOperator op_;
    EstimatorConfig config_;
    double identity_coefficient_ = 0;
    std::vector<Setting> settings_;
};

ExpectationEstimate sampled_expectation(
    const AnsatzSpec &ansatz,
    std::span<const double> params,
    const PauliOperator &op,
    uint64_t shots,
    bool grouping,
    uint64_t seed);

ExpectationEstimate noisy_expectation(
    const AnsatzSpec &ansatz,
    std::span<const double> params,
    const PauliOperator &op,
    uint64_t shots,
    const NoiseSpec &noise,
    bool mitigate,
    uint64_t seed,
    bool grouping = false);

/// Gates that rotate the measurement basis of `basis` onto Z: Ry(−π/2) for X, Rx(π/2) for Y.
Circuit measurement_rotation(PauliString basis, size_t num_qubits);

/// Applies the tensor-product confusion matrix to a distribution over outcomes.
std::vector<double> apply_readout(std::span<const double> probabilities, const NoiseSpec &noise, size_t num_qubits);
/// Inverts the tensor-product confusion matrix, clips negative entries and renormalizes.
/// Throws std::domain_error for a singular confusion matrix.
std::vector<double> mitigate_readout(std::span<const double> frequencies, const NoiseSpec &noise, size_t num_qubits);

/// Individual shot outcomes of the ansatz measured in `basis`.
std::vector<uint64_t> sample_bitstrings(
    const AnsatzSpec &ansatz, std::span<const double> params, PauliString basis, uint64_t shots, uint64_t seed);
/// One outcome per line, qubit 0 leftmost.
void write_bitstrings(std::ostream &out, std::span<const uint64_t> outcomes, size_t num_qubits);

}  // namespace fpsvqe
