#pragma once

#include <cstddef>
#include <vector>

#include "fpsvqe/linalg.h"
#include "fpsvqe/potential.h"

namespace fpsvqe {

/// Real orthonormal Fourier basis on [0, 2π) truncated at harmonic M:
/// index 0 is 1/√(2π), index 2n−1 is cos(nθ)/√π and index 2n is sin(nθ)/√π.
struct FourierBasis {
    size_t harmonics = 0;

    explicit FourierBasis(size_t m);

    size_t size() const {
        return 2 * harmonics + 1;
    }
    /// +1 for the constant and cosines, −1 for sines.
    static int parity(size_t index) {
        return (index != 0 && index % 2 == 0) ? -1 : +1;
    }
    /// Harmonic number n of a basis element.
    static size_t harmonic(size_t index) {
        return (index + 1) / 2;
    }
    double value(size_t index, double theta) const;
    double derivative(size_t index, double theta) const;

    /// ⟨f_i|g|f_j⟩ for a multiplicative trigonometric factor g.
    Matrix multiplication_matrix(const TrigSeries &g) const;
    /// ⟨f_i|d/dθ|f_j⟩, antisymmetric.
    Matrix derivative_matrix() const;
    /// ⟨f_i′|f_j′⟩ = −⟨f_i|d²/dθ²|f_j⟩, diagonal n².
    Matrix kinetic_matrix() const;
};

/// Γ̃_k = −prefactor·[d²/dθ² + U″/2 − U′²/4] in the Fourier basis with cutoff `harmonics`.
/// Exactly symmetric and block diagonal over parity.
Matrix build_single_dihedral_matrix(const DihedralSpec &spec, double prefactor, size_t harmonics);

/// Eigenfunctions Ξ_n of one dihedral operator.
///
/// The full spectrum is stored ascending. The retained set used to form products
/// is parity balanced and interleaved: retained position 2r holds the r-th even
/// eigenfunction and position 2r+1 the r-th odd one. Position 0 is therefore the
/// equilibrium mode and position 1 the slowest odd mode, and a smaller retained
/// set is always a prefix of a larger one.
struct DihedralEigenbasis {
    DihedralSpec spec;
    double prefactor = 0;
    size_t harmonics = 0;
    std::vector<double> eigenvalues;
    /// Column k holds the Fourier coefficients of eigenfunction k.
    Matrix eigenvectors;
    std::vector<int> parities;
    /// Spectrum indices of the retained functions, in retained order.
    std::vector<size_t> retained;

    size_t n_kept() const {
        return retained.size();
    }
    double kept_eigenvalue(size_t i) const {
        return eigenvalues[retained[i]];
    }
    int kept_parity(size_t i) const {
        return parities[retained[i]];
    }
    std::vector<double> kept_vector(size_t i) const;
    /// Ξ_{retained[i]}(θ).
    double kept_function(size_t i, double theta) const;

    /// n_kept × (2M+1) matrix whose rows are the retained eigenvectors.
    Matrix kept_projector() const;
};

DihedralEigenbasis diagonalize_dihedral(
    const Matrix &matrix, const DihedralSpec &spec, double prefactor, size_t n_keep);

/// ⟨Ξ_m|d/dθ|Ξ_n⟩ over the retained functions. Antisymmetric; nonzero only between opposite parities.
Matrix derivative_matrix_elements(const DihedralEigenbasis &basis);
/// ⟨Ξ_m|U′|Ξ_n⟩ over the retained functions. Symmetric; nonzero only between opposite parities.
Matrix uprime_matrix_elements(const DihedralEigenbasis &basis);

struct DihedralSolveOptions {
    size_t harmonics = 16;
    /// Re-solve at doubled cutoff until retained eigenvalues drift less than this.
    double convergence_tolerance = 1e-8;
    size_t max_harmonics = 64;
};

/// Builds and diagonalizes with the truncation convergence guard.
/// Throws std::runtime_error if the retained eigenvalues never settle below `max_harmonics`.
DihedralEigenbasis solve_dihedral(
    const DihedralSpec &spec, double prefactor, size_t n_keep, DihedralSolveOptions options = {});

}  // namespace fpsvqe
