#include "fpsvqe/statevector.h"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fpsvqe {

StateVector::StateVector(size_t num_qubits, const kernels::KernelTable &k)
    : num_qubits_(num_qubits), amps_(size_t{1} << num_qubits), kernels_(&k) {
    if (num_qubits == 0 || num_qubits > 30) {
        throw std::invalid_argument("StateVector: qubit count must be in [1, 30]");
    }
    amps_[0] = 1;
}

StateVector::StateVector(std::vector<cplx> amplitudes, const kernels::KernelTable &k)
    : num_qubits_(0), amps_(std::move(amplitudes)), kernels_(&k) {
    if (amps_.size() < 2 || !std::has_single_bit(amps_.size())) {
        throw std::invalid_argument("StateVector: amplitude count must be a power of two >= 2");
    }
    num_qubits_ = size_t(std::countr_zero(amps_.size()));
}

void StateVector::apply_matrix(size_t qubit, const cplx (&m)[4]) {
    if (qubit >= num_qubits_) {
        throw std::out_of_range("StateVector: qubit index out of range");
    }
    kernels_->apply_single_qubit(amps_.data(), amps_.size(), qubit_bit(num_qubits_, qubit), m);
}

void StateVector::apply_ry(size_t qubit, double theta) {
    double c = std::cos(theta / 2);
    double s = std::sin(theta / 2);
    const cplx m[4] = {c, -s, s, c};
    apply_matrix(qubit, m);
}

void StateVector::apply_rz(size_t qubit, double theta) {
    cplx lo = std::polar(1.0, -theta / 2);
    const cplx m[4] = {lo, 0.0, 0.0, std::conj(lo)};
    apply_matrix(qubit, m);
}

void StateVector::apply_rx(size_t qubit, double theta) {
    double c = std::cos(theta / 2);
    double s = std::sin(theta / 2);
    const cplx m[4] = {c, cplx(0, -s), cplx(0, -s), c};
    apply_matrix(qubit, m);
}

void StateVector::apply_cnot(size_t control, size_t target) {
    if (control >= num_qubits_ || target >= num_qubits_ || control == target) {
        throw std::invalid_argument("StateVector: bad CNOT qubits");
    }
    uint64_t cb = qubit_bit(num_qubits_, control);
    uint64_t tb = qubit_bit(num_qubits_, target);
    for (size_t i = 0; i < amps_.size(); i++) {
        if ((i & cb) && !(i & tb)) {
            std::swap(amps_[i], amps_[i | tb]);
        }
    }
}

void StateVector::apply_pauli(PauliString p) {
    cplx phase = std::pow(cplx(0, 1), p.y_count());
    std::vector<cplx> out(amps_.size());
    for (size_t j = 0; j < amps_.size(); j++) {
        double sign = (std::popcount(j & p.z) & 1) ? -1.0 : 1.0;
        out[j ^ p.x] = phase * sign * amps_[j];
    }
    amps_ = std::move(out);
}

double StateVector::norm() const {
    double total = 0;
    for (double p : probabilities()) {
        total += p;
    }
    return std::sqrt(total);
}

std::vector<double> StateVector::probabilities() const {
    std::vector<double> out(amps_.size());
    kernels_->abs2(amps_.data(), amps_.size(), out.data());
    return out;
}

cplx StateVector::pauli_expectation(PauliString p) const {
    cplx raw = kernels_->pauli_expectation(amps_.data(), amps_.size(), p.x, p.z);
    return raw * std::pow(cplx(0, 1), p.y_count());
}

std::string_view to_string(Entangler e) {
    return e == Entangler::Linear ? "linear" : "full";
}

Entangler parse_entangler(std::string_view text) {
    if (text == "linear") {
        return Entangler::Linear;
    }
    if (text == "full") {
        return Entangler::Full;
    }
    throw std::invalid_argument("unknown entangler '" + std::string(text) + "'");
}

std::vector<std::pair<size_t, size_t>> AnsatzSpec::entangler_pairs() const {
    std::vector<std::pair<size_t, size_t>> pairs;
    if (entangler == Entangler::Linear) {
        for (size_t q = 0; q + 1 < num_qubits; q++) {
            pairs.emplace_back(q, q + 1);
        }
    } else {
        for (size_t i = 0; i < num_qubits; i++) {
            for (size_t j = i + 1; j < num_qubits; j++) {
                pairs.emplace_back(i, j);
            }
        }
    }
    return pairs;
}

Circuit build_circuit(const AnsatzSpec &ansatz, std::span<const double> params) {
    if (params.size() != ansatz.parameter_count()) {
        throw std::invalid_argument(
            "ansatz expects " + std::to_string(ansatz.parameter_count()) + " parameters, got " +
            std::to_string(params.size()));
    }
    const size_t q = ansatz.num_qubits;
    Circuit circuit;
    auto pairs = ansatz.entangler_pairs();
    for (size_t layer = 0; layer <= ansatz.depth; layer++) {
        const double *p = params.data() + layer * 2 * q;
        for (size_t k = 0; k < q; k++) {
            circuit.push_back({GateKind::Ry, k, 0, p[k]});
        }
        for (size_t k = 0; k < q; k++) {
            circuit.push_back({GateKind::Rz, k, 0, p[q + k]});
        }
        if (layer < ansatz.depth) {
            for (auto [c, t] : pairs) {
                circuit.push_back({GateKind::Cnot, c, t, 0});
            }
        }
    }
    return circuit;
}

void apply_gate(StateVector &state, const Gate &gate) {
    switch (gate.kind) {
        case GateKind::Ry:
            state.apply_ry(gate.q0, gate.angle);
            break;
        case GateKind::Rz:
            state.apply_rz(gate.q0, gate.angle);
            break;
        case GateKind::Rx:
            state.apply_rx(gate.q0, gate.angle);
            break;
        case GateKind::Cnot:
            state.apply_cnot(gate.q0, gate.q1);
            break;
    }
}

StateVector run_circuit(size_t num_qubits, const Circuit &circuit) {
    StateVector state(num_qubits);
    for (const auto &g : circuit) {
        apply_gate(state, g);
    }
    return state;
}

StateVector prepare_state(const AnsatzSpec &ansatz, std::span<const double> params) {
    return run_circuit(ansatz.num_qubits, build_circuit(ansatz, params));
}

std::vector<double> embed_parameters(const AnsatzSpec &smaller, std::span<const double> params) {
    if (params.size() != smaller.parameter_count()) {
        throw std::invalid_argument("embed_parameters: parameter count mismatch");
    }
    const size_t q = smaller.num_qubits;
    std::vector<double> out;
    out.reserve(2 * (q + 1) * (smaller.depth + 1));
    for (size_t layer = 0; layer <= smaller.depth; layer++) {
        const double *p = params.data() + layer * 2 * q;
        out.push_back(0.0);
        out.insert(out.end(), p, p + q);
        out.push_back(0.0);
        out.insert(out.end(), p + q, p + 2 * q);
    }
    return out;
}

}  // namespace fpsvqe
