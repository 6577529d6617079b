#include "fpsvqe/chain.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "json.hpp"

namespace fpsvqe {

std::vector<KeptCounts> rotor_chain_ladder() {
    return {{4, 2}, {4, 4}, {8, 4}};
}

size_t qubits_for(size_t j) {
    size_t q = 0;
    while ((size_t{1} << q) < j) {
        q++;
    }
    return std::max<size_t>(q, 1);
}

namespace {

bool contained_in(const std::vector<size_t> &state, const KeptCounts &counts) {
    if (counts.size() != state.size()) {
        return false;
    }
    for (size_t k = 0; k < state.size(); k++) {
        if (state[k] >= counts[k]) {
            return false;
        }
    }
    return true;
}

}  // namespace

CompositeBasis build_composite_basis(
    const ChainSpec &chain,
    const KeptCounts &kept_counts,
    DihedralSolveOptions solve_options,
    const std::vector<KeptCounts> &ladder) {
    chain.validate();
    const size_t n = chain.num_dihedrals();
    if (kept_counts.size() != n) {
        throw std::invalid_argument("build_composite_basis: one kept count per dihedral required");
    }
    if (kept_counts[0] < 2) {
        throw std::invalid_argument("build_composite_basis: the first dihedral must keep at least 2 functions");
    }
    for (size_t k = 0; k < n; k++) {
        if (kept_counts[k] < 1) {
            throw std::invalid_argument("build_composite_basis: kept counts must be >= 1");
        }
        size_t limit = 2 * solve_options.harmonics + 1;
        if (kept_counts[k] > limit) {
            throw std::invalid_argument(
                "build_composite_basis: kept count " + std::to_string(kept_counts[k]) + " exceeds basis size " +
                std::to_string(limit));
        }
    }

    CompositeBasis basis;
    basis.chain = chain;
    basis.kept_counts = kept_counts;
    for (size_t k = 0; k < n; k++) {
        double prefactor = chain.diffusion[k] + chain.diffusion[k + 1];
        basis.per_dihedral.push_back(solve_dihedral(chain.dihedrals[k], prefactor, kept_counts[k], solve_options));
    }

    std::vector<size_t> pinned(n, 0);
    pinned[0] = 1;

    size_t total = 1;
    for (size_t c : kept_counts) {
        total *= c;
    }
    // Flat enumeration with the last dihedral varying fastest: lexicographic order.
    std::vector<std::vector<size_t>> odd;
    for (size_t flat = 0; flat < total; flat++) {
        std::vector<size_t> index(n);
        size_t rest = flat;
        int parity = 1;
        for (size_t k = n; k-- > 0;) {
            index[k] = rest % kept_counts[k];
            rest /= kept_counts[k];
            parity *= basis.per_dihedral[k].kept_parity(index[k]);
        }
        if (parity < 0 && index != pinned) {
            odd.push_back(std::move(index));
        }
    }

    auto tier = [&](const std::vector<size_t> &state) {
        for (size_t t = 0; t < ladder.size(); t++) {
            if (contained_in(state, ladder[t])) {
                return t;
            }
        }
        return ladder.size();
    };
    // Uncoupled energy Σ_k λ_{n_k}. Ties (the free-rotor-like degeneracies) keep lexicographic order;
    // the tolerance sits well above the eigenvalue convergence threshold so the order is stable.
    auto energy = [&](const std::vector<size_t> &state) {
        double e = 0;
        for (size_t k = 0; k < n; k++) {
            e += basis.per_dihedral[k].kept_eigenvalue(state[k]);
        }
        return e;
    };
    std::stable_sort(odd.begin(), odd.end(), [&](const auto &a, const auto &b) {
        size_t ta = tier(a), tb = tier(b);
        if (ta != tb) {
            return ta < tb;
        }
        double ea = energy(a), eb = energy(b);
        if (std::abs(ea - eb) > 1e-6 * std::max({1.0, std::abs(ea), std::abs(eb)})) {
            return ea < eb;
        }
        return false;
    });

    basis.states.push_back(pinned);
    basis.states.insert(basis.states.end(), odd.begin(), odd.end());
    basis.qubit_count = qubits_for(basis.states.size());
    return basis;
}

OperatorMatrix build_chain_matrix(const CompositeBasis &basis, ChainMatrixOptions options) {
    const size_t n = basis.chain.num_dihedrals();
    const size_t j = basis.size();
    std::vector<Matrix> deriv;
    std::vector<Matrix> uprime;
    for (const auto &d : basis.per_dihedral) {
        deriv.push_back(derivative_matrix_elements(d));
        uprime.push_back(uprime_matrix_elements(d));
    }

    OperatorMatrix m(j, j);
    for (size_t r = 0; r < j; r++) {
        const auto &sr = basis.states[r];
        double diag = 0;
        for (size_t k = 0; k < n; k++) {
            diag += basis.per_dihedral[k].kept_eigenvalue(sr[k]);
        }
        m(r, r) = diag;
        if (!options.include_coupling) {
            continue;
        }
        for (size_t c = 0; c < j; c++) {
            const auto &sc = basis.states[c];
            for (size_t k = 0; k + 1 < n; k++) {
                bool spectators_match = true;
                for (size_t other = 0; other < n; other++) {
                    if (other != k && other != k + 1 && sr[other] != sc[other]) {
                        spectators_match = false;
                        break;
                    }
                }
                if (!spectators_match) {
                    continue;
                }
                // Γ̃_{k,k+1} = 2 D_k [∂_k ∂_{k+1} − U′_k U′_{k+1} / 4]; rotor k+1 (0-based) sits between the two dihedrals.
                double weight = 2 * basis.chain.diffusion[k + 1];
                double dd = deriv[k](sr[k], sc[k]) * deriv[k + 1](sr[k + 1], sc[k + 1]);
                double uu = uprime[k](sr[k], sc[k]) * uprime[k + 1](sr[k + 1], sc[k + 1]);
                m(r, c) += weight * (dd - uu / 4);
            }
        }
    }
    for (size_t r = 0; r < j; r++) {
        for (size_t c = r + 1; c < j; c++) {
            double v = (m(r, c) + m(c, r)) / 2;
            m(r, c) = v;
            m(c, r) = v;
        }
    }
    return m;
}

double gershgorin_upper_bound(const OperatorMatrix &matrix) {
    double bound = 0;
    for (size_t r = 0; r < matrix.rows(); r++) {
        double s = 0;
        for (double x : matrix.row(r)) {
            s += std::abs(x);
        }
        bound = std::max(bound, s);
    }
    return bound;
}

OperatorMatrix pad_to_register(const OperatorMatrix &matrix, size_t qubits, double penalty_factor) {
    size_t dim = size_t{1} << qubits;
    if (matrix.rows() > dim) {
        throw std::invalid_argument("pad_to_register: matrix larger than the register");
    }
    if (matrix.rows() == dim) {
        return matrix;
    }
    OperatorMatrix out(dim, dim);
    for (size_t r = 0; r < matrix.rows(); r++) {
        for (size_t c = 0; c < matrix.cols(); c++) {
            out(r, c) = matrix(r, c);
        }
    }
    double penalty = penalty_factor * std::max(gershgorin_upper_bound(matrix), 1.0);
    for (size_t r = matrix.rows(); r < dim; r++) {
        out(r, r) = penalty;
    }
    return out;
}

EigenSystem reference_spectrum(const OperatorMatrix &matrix) {
    if (matrix.asymmetry() > 1e-12) {
        throw std::invalid_argument("reference_spectrum: matrix is not symmetric");
    }
    return jacobi_eigen(matrix);
}

std::vector<double> propagate_distribution(
    const EigenSystem &spectrum, std::span<const double> coefficients, double tau) {
    const size_t n = spectrum.values.size();
    if (coefficients.size() != n) {
        throw std::invalid_argument("propagate_distribution: coefficient count mismatch");
    }
    if (!(tau >= 0)) {
        throw std::invalid_argument("propagate_distribution: tau must be >= 0");
    }
    std::vector<double> out(n, 0.0);
    for (size_t k = 0; k < n; k++) {
        double proj = 0;
        for (size_t r = 0; r < n; r++) {
            proj += spectrum.vectors(r, k) * coefficients[r];
        }
        proj *= std::exp(-spectrum.values[k] * tau);
        for (size_t r = 0; r < n; r++) {
            out[r] += proj * spectrum.vectors(r, k);
        }
    }
    return out;
}

std::vector<double> propagate_distribution(
    const OperatorMatrix &matrix, std::span<const double> coefficients, double tau) {
    return propagate_distribution(reference_spectrum(matrix), coefficients, tau);
}

double rate_constant(double lambda1) {
    if (!(lambda1 >= 0)) {
        throw std::invalid_argument("rate_constant: lambda1 must be >= 0");
    }
    return lambda1 / 2;
}

void write_matrix_text(std::ostream &out, const OperatorMatrix &matrix) {
    auto flags = out.flags();
    auto precision = out.precision();
    out << matrix.rows() << ' ' << matrix.cols() << '\n';
    out << std::setprecision(17);
    for (size_t r = 0; r < matrix.rows(); r++) {
        for (size_t c = 0; c < matrix.cols(); c++) {
            if (c) {
                out << ' ';
            }
            out << matrix(r, c);
        }
        out << '\n';
    }
    out.flags(flags);
    out.precision(precision);
}

OperatorMatrix read_matrix_text(std::istream &in) {
    size_t rows = 0;
    size_t cols = 0;
    if (!(in >> rows >> cols)) {
        throw std::runtime_error("read_matrix_text: missing header");
    }
    OperatorMatrix m(rows, cols);
    for (size_t r = 0; r < rows; r++) {
        for (size_t c = 0; c < cols; c++) {
            if (!(in >> m(r, c))) {
                throw std::runtime_error("read_matrix_text: truncated data");
            }
        }
    }
    return m;
}

std::string matrix_to_json(const OperatorMatrix &matrix) {
    nlohmann::json j;
    j["rows"] = matrix.rows();
    j["cols"] = matrix.cols();
    j["data"] = std::vector<double>(matrix.data().begin(), matrix.data().end());
    // nlohmann serializes doubles with round-trip precision (17 significant digits).
    return j.dump();
}

OperatorMatrix matrix_from_json(const std::string &text) {
    auto j = nlohmann::json::parse(text);
    size_t rows = j.at("rows").get<size_t>();
    size_t cols = j.at("cols").get<size_t>();
    auto data = j.at("data").get<std::vector<double>>();
    if (data.size() != rows * cols) {
        throw std::runtime_error("matrix_from_json: data size mismatch");
    }
    OperatorMatrix m(rows, cols);
    for (size_t r = 0; r < rows; r++) {
        for (size_t c = 0; c < cols; c++) {
            m(r, c) = data[r * cols + c];
        }
    }
    return m;
}

}  // namespace fpsvqe
