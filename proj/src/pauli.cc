#include "fpsvqe/pauli.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace fpsvqe {

int PauliString::y_count() const {
    return std::popcount(x & z);
}

char PauliString::at(size_t num_qubits, size_t qubit) const {
    uint64_t bit = qubit_bit(num_qubits, qubit);
    bool xb = x & bit;
    bool zb = z & bit;
    return xb ? (zb ? 'Y' : 'X') : (zb ? 'Z' : 'I');
}

std::string PauliString::to_string(size_t num_qubits) const {
    std::string s(num_qubits, 'I');
    for (size_t q = 0; q < num_qubits; q++) {
        s[q] = at(num_qubits, q);
    }
    return s;
}

PauliString PauliString::parse(std::string_view text) {
    if (text.empty() || text.size() > 63) {
        throw std::invalid_argument("PauliString::parse: bad length");
    }
    PauliString p;
    size_t n = text.size();
    for (size_t q = 0; q < n; q++) {
        uint64_t bit = qubit_bit(n, q);
        switch (text[q]) {
            case 'I':
                break;
            case 'X':
                p.x |= bit;
                break;
            case 'Y':
                p.x |= bit;
                p.z |= bit;
                break;
            case 'Z':
                p.z |= bit;
                break;
            default:
                throw std::invalid_argument("PauliString::parse: unexpected character '" + std::string(1, text[q]) + "'");
        }
    }
    return p;
}

void PauliOperator::add(PauliString p, cplx coefficient) {
    terms_[p] += coefficient;
}

cplx PauliOperator::coefficient(PauliString p) const {
    auto it = terms_.find(p);
    return it == terms_.end() ? cplx{} : it->second;
}

PauliOperator PauliOperator::pruned(double threshold) const {
    PauliOperator out(num_qubits_);
    for (const auto &[p, c] : terms_) {
        if (std::abs(c) >= threshold) {
            out.terms_.emplace(p, c);
        }
    }
    return out;
}

std::vector<PauliTerm> PauliOperator::sorted_terms() const {
    std::vector<PauliTerm> out;
    out.reserve(terms_.size());
    for (const auto &[p, c] : terms_) {
        out.push_back({p, c});
    }
    std::sort(out.begin(), out.end(), [&](const PauliTerm &a, const PauliTerm &b) {
        return a.string.to_string(num_qubits_) < b.string.to_string(num_qubits_);
    });
    return out;
}

std::vector<cplx> PauliOperator::to_dense() const {
    const size_t dim = size_t{1} << num_qubits_;
    std::vector<cplx> m(dim * dim);
    for (const auto &[p, c] : terms_) {
        cplx phase = std::pow(cplx(0, 1), p.y_count());
        // Column j maps to row j ⊕ x.
        for (uint64_t j = 0; j < dim; j++) {
            double sign = (std::popcount(j & p.z) & 1) ? -1.0 : 1.0;
            m[(j ^ p.x) * dim + j] += c * phase * sign;
        }
    }
    return m;
}

OperatorMatrix PauliOperator::to_real_matrix(double tolerance) const {
    const size_t dim = size_t{1} << num_qubits_;
    auto dense = to_dense();
    OperatorMatrix out(dim, dim);
    for (size_t r = 0; r < dim; r++) {
        for (size_t c = 0; c < dim; c++) {
            cplx v = dense[r * dim + c];
            if (std::abs(v.imag()) > tolerance) {
                throw std::domain_error("PauliOperator::to_real_matrix: operator has a complex entry");
            }
            out(r, c) = v.real();
        }
    }
    return out;
}

bool PauliOperator::is_real_symmetric(double tolerance) const {
    for (const auto &[p, c] : terms_) {
        if (std::abs(c.imag()) > tolerance) {
            return false;
        }
        if ((p.y_count() & 1) && std::abs(c) > tolerance) {
            return false;
        }
    }
    return true;
}

std::vector<PauliTerm> map_element(uint64_t r, uint64_t c, double gamma, size_t num_qubits) {
    const uint64_t dim = uint64_t{1} << num_qubits;
    if (r >= dim || c >= dim) {
        throw std::invalid_argument("map_element: index outside the register");
    }
    std::vector<PauliTerm> terms{{PauliString{}, cplx(gamma)}};
    for (size_t q = 0; q < num_qubits; q++) {
        uint64_t bit = qubit_bit(num_qubits, q);
        bool dr = r & bit;
        bool dc = c & bit;
        double sign = dr ? -1.0 : 1.0;
        std::vector<PauliTerm> next;
        next.reserve(terms.size() * 2);
        for (const auto &t : terms) {
            if (dr == dc) {
                // |d⟩⟨d| = ½[I + (−1)^d Z]
                next.push_back({t.string, t.coefficient * 0.5});
                next.push_back({{t.string.x, t.string.z | bit}, t.coefficient * (0.5 * sign)});
            } else {
                // |d⟩⟨1−d| = ½[X + (−1)^d iY]
                next.push_back({{t.string.x | bit, t.string.z}, t.coefficient * 0.5});
                next.push_back({{t.string.x | bit, t.string.z | bit}, t.coefficient * cplx(0, 0.5 * sign)});
            }
        }
        terms = std::move(next);
    }
    return terms;
}

PauliOperator map_operator_unpruned(const OperatorMatrix &matrix) {
    const size_t dim = matrix.rows();
    if (matrix.cols() != dim || dim < 2 || !std::has_single_bit(dim)) {
        throw std::invalid_argument("map_operator: matrix dimension must be a power of two >= 2");
    }
    const size_t q = size_t(std::countr_zero(dim));
    PauliOperator op(q);
    for (size_t r = 0; r < dim; r++) {
        for (size_t c = 0; c < dim; c++) {
            double gamma = matrix(r, c);
            if (gamma == 0) {
                continue;
            }
            for (const auto &t : map_element(r, c, gamma, q)) {
                op.add(t.string, t.coefficient);
            }
        }
    }
    return op;
}

PauliOperator map_operator(const OperatorMatrix &matrix, double prune_threshold) {
    return map_operator_unpruned(matrix).pruned(prune_threshold);
}

namespace {

/// Qubit-wise compatibility: on every qubit both act trivially or identically.
bool qubitwise_compatible(PauliString basis, PauliString p) {
    uint64_t shared = basis.support() & p.support();
    return ((basis.x ^ p.x) & shared) == 0 && ((basis.z ^ p.z) & shared) == 0;
}

}  // namespace

std::vector<MeasurementGroup> group_qubitwise_commuting(const PauliOperator &op) {
    auto terms = op.sorted_terms();
    std::stable_sort(terms.begin(), terms.end(), [](const PauliTerm &a, const PauliTerm &b) {
        return std::abs(a.coefficient) > std::abs(b.coefficient);
    });
    std::vector<MeasurementGroup> groups;
    for (const auto &t : terms) {
        bool placed = false;
        for (auto &g : groups) {
            if (qubitwise_compatible(g.basis, t.string)) {
                g.basis.x |= t.string.x;
                g.basis.z |= t.string.z;
                g.terms.push_back(t);
                placed = true;
                break;
            }
        }
        if (!placed) {
            groups.push_back({t.string, {t}});
        }
    }
    return groups;
}

std::vector<MeasurementGroup> ungrouped_settings(const PauliOperator &op) {
    std::vector<MeasurementGroup> out;
    for (const auto &t : op.sorted_terms()) {
        out.push_back({t.string, {t}});
    }
    return out;
}

ResourceReport resource_report(const CompositeBasis &basis) {
    OperatorMatrix m = build_chain_matrix(basis);
    ResourceReport rep;
    rep.basis_size = basis.size();
    rep.qubits = basis.qubit_count;
    for (double v : m.data()) {
        if (std::abs(v) > 1e-12) {
            rep.nonzero_elements++;
        }
    }
    PauliOperator raw = map_operator_unpruned(pad_to_register(m, basis.qubit_count));
    PauliOperator op = raw.pruned(1e-12);
    rep.terms_generated = raw.size();
    rep.terms_after_pruning = op.size();
    size_t groups = 0;
    for (const auto &g : group_qubitwise_commuting(op)) {
        if (!g.basis.is_identity()) {
            groups++;
        }
    }
    rep.measurement_groups = groups;
    return rep;
}

void write_operator_text(std::ostream &out, const PauliOperator &op) {
    auto precision = out.precision();
    out << std::setprecision(17);
    for (const auto &t : op.sorted_terms()) {
        out << t.string.to_string(op.num_qubits()) << ' ' << t.coefficient.real() << '\n';
    }
    out.precision(precision);
}

PauliOperator read_operator_text(std::istream &in) {
    std::string line;
    std::vector<std::pair<PauliString, double>> terms;
    size_t q = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        std::istringstream ls(line);
        std::string s;
        double c;
        if (!(ls >> s >> c)) {
            throw std::runtime_error("read_operator_text: malformed line '" + line + "'");
        }
        if (q != 0 && s.size() != q) {
            throw std::runtime_error("read_operator_text: inconsistent string lengths");
        }
        q = s.size();
        terms.emplace_back(PauliString::parse(s), c);
    }
    PauliOperator op(q);
    for (const auto &[p, c] : terms) {
        op.add(p, c);
    }
    return op;
}

}  // namespace fpsvqe
