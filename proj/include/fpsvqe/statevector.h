#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "fpsvqe/kernels.h"
#include "fpsvqe/pauli.h"

namespace fpsvqe {

/// Pure state of a small register; amplitude index bits follow qubit_bit().
class StateVector {
   public:
    /// |0…0⟩ on `num_qubits` qubits.
    explicit StateVector(size_t num_qubits, const kernels::KernelTable &k = kernels::active());
    /// Takes explicit amplitudes; the count must be a power of two.
    StateVector(std::vector<cplx> amplitudes, const kernels::KernelTable &k = kernels::active());

    size_t num_qubits() const {
        return num_qubits_;
    }
    size_t dimension() const {
        return amps_.size();
    }
    std::span<const cplx> amplitudes() const {
        return amps_;
    }
    const kernels::KernelTable &kernel_table() const {
        return *kernels_;
    }

    /// exp(−iθY/2), exp(−iθZ/2) and exp(−iθX/2).
    void apply_ry(size_t qubit, double theta);
    void apply_rz(size_t qubit, double theta);
    void apply_rx(size_t qubit, double theta);
    void apply_cnot(size_t control, size_t target);
    void apply_pauli(PauliString p);
    void apply_matrix(size_t qubit, const cplx (&m)[4]);

    double norm() const;
    std::vector<double> probabilities() const;
    /// ⟨ψ|P|ψ⟩.
    cplx pauli_expectation(PauliString p) const;

   private:
    size_t num_qubits_;
    std::vector<cplx> amps_;
    const kernels::KernelTable *kernels_;
};

enum class Entangler {
    /// CNOT(q, q+1) for every adjacent pair.
    Linear,
    /// CNOT(i, j) for every i < j, i outer.
    Full,
};

std::string_view to_string(Entangler e);
Entangler parse_entangler(std::string_view text);

/// RyRz hardware-efficient circuit: d+1 rotation layers (Ry on all qubits, then Rz on all
/// qubits) with an entangler block between consecutive layers.
///
/// Parameters are laid out per layer: [Ry(q=0..Q−1), Rz(q=0..Q−1)].
struct AnsatzSpec {
    size_t num_qubits = 2;
    size_t depth = 1;
    Entangler entangler = Entangler::Linear;

    size_t parameter_count() const {
        return 2 * num_qubits * (depth + 1);
    }
    std::vector<std::pair<size_t, size_t>> entangler_pairs() const;
};

enum class GateKind { Ry, Rz, Rx, Cnot };

struct Gate {
    GateKind kind;
    size_t q0;
    size_t q1 = 0;
    double angle = 0;

    bool two_qubit() const {
        return kind == GateKind::Cnot;
    }
};

using Circuit = std::vector<Gate>;

/// Validates the parameter count and lays out the gate sequence.
Circuit build_circuit(const AnsatzSpec &ansatz, std::span<const double> params);
void apply_gate(StateVector &state, const Gate &gate);
StateVector run_circuit(size_t num_qubits, const Circuit &circuit);

StateVector prepare_state(const AnsatzSpec &ansatz, std::span<const double> params);

/// Parameters for a (Q+1)-qubit ansatz whose state is |0⟩ ⊗ |φ⟩, the new qubit being
/// qubit 0 (most significant). It only ever acts as a CNOT control in |0⟩, so the
/// previous state sits unchanged on the leading 2^Q register entries.
std::vector<double> embed_parameters(const AnsatzSpec &smaller, std::span<const double> params);

}  // namespace fpsvqe
