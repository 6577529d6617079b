#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string_view>

namespace fpsvqe::kernels {

using cplx = std::complex<double>;

/// Σ_j conj(a[j ⊕ x]) a[j] (−1)^{|j ∧ z|}; equals ⟨ψ|P|ψ⟩ / i^{|x∧z|}.
using PauliExpectationFn = cplx (*)(const cplx *amps, size_t n, uint64_t x, uint64_t z);
/// Applies the 2×2 matrix m (row-major) on the amplitude pairs (i, i | bit) with i ∧ bit = 0.
using ApplySingleQubitFn = void (*)(cplx *amps, size_t n, uint64_t bit, const cplx *m);
/// out[j] = |a[j]|².
using Abs2Fn = void (*)(const cplx *amps, size_t n, double *out);

/// One implementation of the statevector inner loops.
struct KernelTable {
    std::string_view name;
    PauliExpectationFn pauli_expectation;
    ApplySingleQubitFn apply_single_qubit;
    Abs2Fn abs2;
};

/// Portable reference kernels.
const KernelTable &scalar();
/// AVX2/FMA kernels, or nullptr when not compiled in or not supported by this CPU.
const KernelTable *avx2();
/// The table used by the simulator: AVX2 when available, unless the environment
/// variable FPSVQE_KERNELS=scalar forces the reference path. Chosen once.
const KernelTable &active();

}  // namespace fpsvqe::kernels
