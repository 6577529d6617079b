#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fpsvqe/dihedral.h"
#include "fpsvqe/linalg.h"
#include "fpsvqe/potential.h"

namespace fpsvqe {

/// Dense real symmetric operator in the composite basis.
using OperatorMatrix = Matrix;

/// Per-dihedral retained counts, e.g. {4, 2}.
using KeptCounts = std::vector<size_t>;

/// The nested basis ladder of the three-rotor experiments: 2, 3 and 4 qubits.
std::vector<KeptCounts> rotor_chain_ladder();

/// Odd-parity product states φ_n = Π_k Ξ_{n_k}(θ_k).
///
/// State 0 is always (1, 0, …, 0). The remaining states are grouped in tiers: a
/// state belongs to the first ladder entry that contains it (n_k < counts_k for
/// every k) and tiers are emitted in ladder order. Within a tier states go by ascending
/// uncoupled energy Σ_k λ_{n_k}, ties lexicographically.
/// Built against the same ladder, a basis for a smaller entry is a prefix of any
/// larger one.
struct CompositeBasis {
    ChainSpec chain;
    std::vector<DihedralEigenbasis> per_dihedral;
    KeptCounts kept_counts;
    std::vector<std::vector<size_t>> states;
    size_t qubit_count = 0;

    size_t size() const {
        return states.size();
    }
    size_t register_size() const {
        return size_t{1} << qubit_count;
    }
};

/// ⌈log₂ j⌉, with 1 ↦ 1 so that a register always has at least one qubit.
size_t qubits_for(size_t j);

CompositeBasis build_composite_basis(
    const ChainSpec &chain,
    const KeptCounts &kept_counts,
    DihedralSolveOptions solve_options = {},
    const std::vector<KeptCounts> &ladder = rotor_chain_ladder());

struct ChainMatrixOptions {
    /// Include the Γ̃_{k,k+1} nearest-neighbour coupling terms.
    bool include_coupling = true;
};

OperatorMatrix build_chain_matrix(const CompositeBasis &basis, ChainMatrixOptions options = {});

/// Embeds into a 2^qubits register. Unused register states get a diagonal penalty of
/// `penalty_factor` times the Gershgorin bound on the largest eigenvalue.
OperatorMatrix pad_to_register(const OperatorMatrix &matrix, size_t qubits, double penalty_factor = 10.0);

/// Upper bound on the spectrum: max_r Σ_c |a_rc|.
double gershgorin_upper_bound(const OperatorMatrix &matrix);

/// Full ascending spectrum. On an odd-sector matrix values[0] is λ₁.
EigenSystem reference_spectrum(const OperatorMatrix &matrix);

/// c(τ) = V exp(−Λτ) Vᵀ c(0).
std::vector<double> propagate_distribution(
    const EigenSystem &spectrum, std::span<const double> coefficients, double tau);
std::vector<double> propagate_distribution(
    const OperatorMatrix &matrix, std::span<const double> coefficients, double tau);

/// Isomerization rate k = λ₁ / 2.
double rate_constant(double lambda1);

/// Row-major text dump: first line "<rows> <cols>", then one row per line, 17 significant digits.
void write_matrix_text(std::ostream &out, const OperatorMatrix &matrix);
OperatorMatrix read_matrix_text(std::istream &in);
std::string matrix_to_json(const OperatorMatrix &matrix);
OperatorMatrix matrix_from_json(const std::string &text);

}  // namespace fpsvqe
