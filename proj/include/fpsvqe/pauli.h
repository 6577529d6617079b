#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "fpsvqe/chain.h"

namespace fpsvqe {

using cplx = std::complex<double>;

/// Register bit order shared by the mapping and the simulator: qubit 0 is the
/// leftmost, most significant digit δ₁ of a basis index, so |j⟩ = |δ₁(j) … δ_Q(j)⟩.
inline uint64_t qubit_bit(size_t num_qubits, size_t qubit) {
    return uint64_t{1} << (num_qubits - 1 - qubit);
}

/// Tensor product of {I, X, Y, Z} as an (x, z) mask pair: X = (1,0), Z = (0,1), Y = (1,1).
/// As an operator, P|j⟩ = i^{|x∧z|} (−1)^{|j∧z|} |j ⊕ x⟩.
struct PauliString {
    uint64_t x = 0;
    uint64_t z = 0;

    bool operator==(const PauliString &) const = default;
    bool is_identity() const {
        return x == 0 && z == 0;
    }
    /// Number of Y factors.
    int y_count() const;
    uint64_t support() const {
        return x | z;
    }
    /// 'I', 'X', 'Y' or 'Z' on the given qubit.
    char at(size_t num_qubits, size_t qubit) const;

    std::string to_string(size_t num_qubits) const;
    static PauliString parse(std::string_view text);
};

struct PauliStringHash {
    size_t operator()(const PauliString &p) const {
        return std::hash<uint64_t>{}(p.x * 0x9E3779B97F4A7C15ull ^ (p.z + 0x632BE59BD9B4E019ull));
    }
};

struct PauliTerm {
    PauliString string;
    cplx coefficient;
};

/// Weighted sum of Pauli strings on a fixed register.
class PauliOperator {
   public:
    explicit PauliOperator(size_t num_qubits = 0) : num_qubits_(num_qubits) {
    }

    size_t num_qubits() const {
        return num_qubits_;
    }
    size_t size() const {
        return terms_.size();
    }
    void add(PauliString p, cplx coefficient);
    cplx coefficient(PauliString p) const;
    /// Drops terms with |coefficient| below `threshold`.
    PauliOperator pruned(double threshold) const;
    /// Terms in a canonical order (by string text).
    std::vector<PauliTerm> sorted_terms() const;

    /// Σ_j γ_j P_j as a dense complex matrix, row-major 2^Q × 2^Q.
    std::vector<cplx> to_dense() const;
    /// Real part of to_dense(); throws std::domain_error if any imaginary part exceeds `tolerance`.
    OperatorMatrix to_real_matrix(double tolerance = 1e-12) const;
    /// All coefficients real and no odd-Y strings, to `tolerance`.
    bool is_real_symmetric(double tolerance = 1e-12) const;

   private:
    size_t num_qubits_;
    std::unordered_map<PauliString, cplx, PauliStringHash> terms_;
};

/// The 2^Q Pauli terms of γ|r⟩⟨c|: per qubit ½[I ± Z] for equal digits and ½[X ± iY] otherwise,
/// the sign being (−1)^{δ_q(r)}.
std::vector<PauliTerm> map_element(uint64_t r, uint64_t c, double gamma, size_t num_qubits);

/// Accumulates map_element over every nonzero entry of a 2^Q-square matrix without pruning.
PauliOperator map_operator_unpruned(const OperatorMatrix &matrix);
/// As map_operator_unpruned, then drops |coefficient| < threshold.
PauliOperator map_operator(const OperatorMatrix &matrix, double prune_threshold = 1e-12);

/// Terms measurable with one circuit: on each qubit every term is I or one common Pauli.
struct MeasurementGroup {
    /// Per-qubit measurement basis; identity where no term acts.
    PauliString basis;
    std::vector<PauliTerm> terms;
};

/// Greedy first-fit partition in descending |coefficient| order.
std::vector<MeasurementGroup> group_qubitwise_commuting(const PauliOperator &op);

/// One measurement setting per term.
std::vector<MeasurementGroup> ungrouped_settings(const PauliOperator &op);

struct ResourceReport {
    size_t basis_size = 0;
    size_t qubits = 0;
    size_t nonzero_elements = 0;
    size_t terms_generated = 0;
    size_t terms_after_pruning = 0;
    size_t measurement_groups = 0;
};

ResourceReport resource_report(const CompositeBasis &basis);

/// One term per line: "<IXYZ string, qubit 0 leftmost> <real coefficient>" with 17 significant digits.
void write_operator_text(std::ostream &out, const PauliOperator &op);
PauliOperator read_operator_text(std::istream &in);

}  // namespace fpsvqe
