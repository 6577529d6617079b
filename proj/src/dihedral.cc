#include "fpsvqe/dihedral.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace fpsvqe {

namespace {

using cplx = std::complex<double>;

/// Coefficients c_k of e^{ikθ}, k = −H..H, stored at offset k + H.
struct ExpSeries {
    size_t half_width;
    std::vector<cplx> coef;

    explicit ExpSeries(size_t h) : half_width(h), coef(2 * h + 1) {
    }
    cplx &at(long k) {
        return coef[size_t(k + long(half_width))];
    }
    cplx at(long k) const {
        return coef[size_t(k + long(half_width))];
    }
};

ExpSeries basis_function_series(size_t index, size_t width) {
    ExpSeries s(width);
    const double inv_sqrt_pi = 1 / std::sqrt(std::numbers::pi);
    if (index == 0) {
        s.at(0) = 1 / std::sqrt(2 * std::numbers::pi);
        return s;
    }
    long n = long(FourierBasis::harmonic(index));
    if (FourierBasis::parity(index) > 0) {
        s.at(n) = inv_sqrt_pi / 2;
        s.at(-n) = inv_sqrt_pi / 2;
    } else {
        s.at(n) = cplx(0, -inv_sqrt_pi / 2);
        s.at(-n) = cplx(0, inv_sqrt_pi / 2);
    }
    return s;
}

ExpSeries trig_to_exp(const TrigSeries &g) {
    ExpSeries s(g.max_harmonic());
    for (size_t n = 0; n <= g.max_harmonic(); n++) {
        double a = g.cos_coef[n];
        double b = n < g.sin_coef.size() ? g.sin_coef[n] : 0.0;
        if (n == 0) {
            s.at(0) += a;
            continue;
        }
        s.at(long(n)) += cplx(a / 2, -b / 2);
        s.at(-long(n)) += cplx(a / 2, b / 2);
    }
    return s;
}

/// ∫₀^{2π} a(θ) b(θ) c(θ) dθ = 2π Σ_{p+q+r=0} a_p b_q c_r.
double triple_integral(const ExpSeries &a, const ExpSeries &b, const ExpSeries &c) {
    cplx total = 0;
    long ha = long(a.half_width);
    long hb = long(b.half_width);
    long hc = long(c.half_width);
    for (long p = -ha; p <= ha; p++) {
        if (a.at(p) == 0.0) {
            continue;
        }
        for (long q = -hb; q <= hb; q++) {
            long r = -p - q;
            if (r < -hc || r > hc) {
                continue;
            }
            total += a.at(p) * b.at(q) * c.at(r);
        }
    }
    return 2 * std::numbers::pi * total.real();
}

Matrix symmetric_from_upper(size_t n, auto &&element) {
    Matrix m(n, n);
    for (size_t i = 0; i < n; i++) {
        for (size_t j = i; j < n; j++) {
            double v = element(i, j);
            m(i, j) = v;
            m(j, i) = v;
        }
    }
    return m;
}

}  // namespace

FourierBasis::FourierBasis(size_t m) : harmonics(m) {
    if (m == 0) {
        throw std::invalid_argument("FourierBasis: harmonic cutoff must be >= 1");
    }
}

double FourierBasis::value(size_t index, double theta) const {
    if (index == 0) {
        return 1 / std::sqrt(2 * std::numbers::pi);
    }
    double n = double(harmonic(index));
    double s = 1 / std::sqrt(std::numbers::pi);
    return parity(index) > 0 ? s * std::cos(n * theta) : s * std::sin(n * theta);
}

double FourierBasis::derivative(size_t index, double theta) const {
    if (index == 0) {
        return 0;
    }
    double n = double(harmonic(index));
    double s = 1 / std::sqrt(std::numbers::pi);
    return parity(index) > 0 ? -n * s * std::sin(n * theta) : n * s * std::cos(n * theta);
}

Matrix FourierBasis::multiplication_matrix(const TrigSeries &g) const {
    ExpSeries gs = trig_to_exp(g);
    std::vector<ExpSeries> f;
    for (size_t i = 0; i < size(); i++) {
        f.push_back(basis_function_series(i, harmonics));
    }
    return symmetric_from_upper(size(), [&](size_t i, size_t j) { return triple_integral(f[i], gs, f[j]); });
}

Matrix FourierBasis::derivative_matrix() const {
    // d/dθ cos(nθ) = −n sin(nθ) and d/dθ sin(nθ) = n cos(nθ).
    Matrix m(size(), size());
    for (size_t n = 1; n <= harmonics; n++) {
        size_t c = 2 * n - 1;
        size_t s = 2 * n;
        m(c, s) = double(n);
        m(s, c) = -double(n);
    }
    return m;
}

Matrix FourierBasis::kinetic_matrix() const {
    Matrix m(size(), size());
    for (size_t i = 1; i < size(); i++) {
        double n = double(harmonic(i));
        m(i, i) = n * n;
    }
    return m;
}

Matrix build_single_dihedral_matrix(const DihedralSpec &spec, double prefactor, size_t harmonics) {
    spec.validate();
    if (!(prefactor > 0)) {
        throw std::invalid_argument("build_single_dihedral_matrix: prefactor must be > 0");
    }
    FourierBasis basis(harmonics);
    Matrix kinetic = basis.kinetic_matrix();
    Matrix effective = basis.multiplication_matrix(effective_potential_series(spec));
    return symmetric_from_upper(basis.size(), [&](size_t i, size_t j) {
        double v = prefactor * (kinetic(i, j) - effective(i, j));
        // The parity blocks never mix; keep them exactly zero.
        return FourierBasis::parity(i) == FourierBasis::parity(j) ? v : 0.0;
    });
}

std::vector<double> DihedralEigenbasis::kept_vector(size_t i) const {
    std::vector<double> v(eigenvectors.rows());
    for (size_t r = 0; r < v.size(); r++) {
        v[r] = eigenvectors(r, retained[i]);
    }
    return v;
}

double DihedralEigenbasis::kept_function(size_t i, double theta) const {
    FourierBasis basis(harmonics);
    double total = 0;
    for (size_t r = 0; r < basis.size(); r++) {
        total += eigenvectors(r, retained[i]) * basis.value(r, theta);
    }
    return total;
}

Matrix DihedralEigenbasis::kept_projector() const {
    Matrix p(n_kept(), eigenvectors.rows());
    for (size_t i = 0; i < n_kept(); i++) {
        for (size_t r = 0; r < eigenvectors.rows(); r++) {
            p(i, r) = eigenvectors(r, retained[i]);
        }
    }
    return p;
}

DihedralEigenbasis diagonalize_dihedral(
    const Matrix &matrix, const DihedralSpec &spec, double prefactor, size_t n_keep) {
    const size_t size = matrix.rows();
    if (matrix.cols() != size || size % 2 != 1 || size < 3) {
        throw std::invalid_argument("diagonalize_dihedral: expected a (2M+1)-square Fourier matrix");
    }
    if (n_keep > size) {
        throw std::invalid_argument(
            "diagonalize_dihedral: n_keep=" + std::to_string(n_keep) + " exceeds basis size " +
            std::to_string(size));
    }

    std::vector<size_t> even_index;
    std::vector<size_t> odd_index;
    for (size_t i = 0; i < size; i++) {
        (FourierBasis::parity(i) > 0 ? even_index : odd_index).push_back(i);
    }
    if ((n_keep + 1) / 2 > even_index.size() || n_keep / 2 > odd_index.size()) {
        throw std::invalid_argument("diagonalize_dihedral: not enough functions of each parity for n_keep");
    }

    struct Mode {
        double value;
        int parity;
        size_t dominant;
        std::vector<double> coef;
    };
    std::vector<Mode> modes;
    for (int parity : {+1, -1}) {
        const auto &idx = parity > 0 ? even_index : odd_index;
        Matrix block(idx.size(), idx.size());
        for (size_t a = 0; a < idx.size(); a++) {
            for (size_t b = 0; b < idx.size(); b++) {
                block(a, b) = matrix(idx[a], idx[b]);
            }
        }
        EigenSystem es = jacobi_eigen(block);
        for (size_t k = 0; k < idx.size(); k++) {
            Mode m{es.values[k], parity, 0, std::vector<double>(size, 0.0)};
            double best = -1;
            for (size_t a = 0; a < idx.size(); a++) {
                m.coef[idx[a]] = es.vectors(a, k);
                if (std::abs(es.vectors(a, k)) > best + 1e-12) {
                    best = std::abs(es.vectors(a, k));
                    m.dominant = idx[a];
                }
            }
            modes.push_back(std::move(m));
        }
    }
    double scale = 1;
    for (const auto &m : modes) {
        scale = std::max(scale, std::abs(m.value));
    }
    const double tie = 1e-10 * scale;
    std::stable_sort(modes.begin(), modes.end(), [&](const Mode &a, const Mode &b) {
        if (std::abs(a.value - b.value) > tie) {
            return a.value < b.value;
        }
        if (a.parity != b.parity) {
            return a.parity > b.parity;
        }
        return a.dominant < b.dominant;
    });

    DihedralEigenbasis out;
    out.spec = spec;
    out.prefactor = prefactor;
    out.harmonics = (size - 1) / 2;
    out.eigenvectors = Matrix(size, size);
    std::vector<size_t> even_rank;
    std::vector<size_t> odd_rank;
    for (size_t k = 0; k < size; k++) {
        out.eigenvalues.push_back(modes[k].value);
        out.parities.push_back(modes[k].parity);
        (modes[k].parity > 0 ? even_rank : odd_rank).push_back(k);
        for (size_t r = 0; r < size; r++) {
            out.eigenvectors(r, k) = modes[k].coef[r];
        }
    }
    for (size_t i = 0; i < n_keep; i++) {
        out.retained.push_back(i % 2 == 0 ? even_rank[i / 2] : odd_rank[i / 2]);
    }
    return out;
}

namespace {

Matrix project(const DihedralEigenbasis &basis, const Matrix &fourier_operator) {
    Matrix p = basis.kept_projector();
    return p * fourier_operator * p.transposed();
}

}  // namespace

Matrix derivative_matrix_elements(const DihedralEigenbasis &basis) {
    Matrix d = project(basis, FourierBasis(basis.harmonics).derivative_matrix());
    // Exact antisymmetry and parity selection.
    for (size_t i = 0; i < d.rows(); i++) {
        for (size_t j = i; j < d.cols(); j++) {
            double v = basis.kept_parity(i) == basis.kept_parity(j) ? 0.0 : (d(i, j) - d(j, i)) / 2;
            d(i, j) = v;
            d(j, i) = -v;
        }
    }
    return d;
}

Matrix uprime_matrix_elements(const DihedralEigenbasis &basis) {
    Matrix u = project(basis, FourierBasis(basis.harmonics).multiplication_matrix(potential_d1_series(basis.spec)));
    for (size_t i = 0; i < u.rows(); i++) {
        for (size_t j = i; j < u.cols(); j++) {
            double v = basis.kept_parity(i) == basis.kept_parity(j) ? 0.0 : (u(i, j) + u(j, i)) / 2;
            u(i, j) = v;
            u(j, i) = v;
        }
    }
    return u;
}

DihedralEigenbasis solve_dihedral(
    const DihedralSpec &spec, double prefactor, size_t n_keep, DihedralSolveOptions options) {
    size_t m = std::max<size_t>(options.harmonics, 1);
    while (m * 2 <= options.max_harmonics) {
        auto coarse = diagonalize_dihedral(build_single_dihedral_matrix(spec, prefactor, m), spec, prefactor, n_keep);
        auto fine =
            diagonalize_dihedral(build_single_dihedral_matrix(spec, prefactor, 2 * m), spec, prefactor, n_keep);
        double drift = 0;
        for (size_t i = 0; i < n_keep; i++) {
            drift = std::max(drift, std::abs(coarse.kept_eigenvalue(i) - fine.kept_eigenvalue(i)));
        }
        if (drift < options.convergence_tolerance) {
            return coarse;
        }
        m *= 2;
    }
    throw std::runtime_error(
        "solve_dihedral: retained eigenvalues not converged up to " + std::to_string(options.max_harmonics) +
        " harmonics");
}

}  // namespace fpsvqe
