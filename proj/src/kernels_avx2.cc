// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include <immintrin.h>

#include <bit>

#include "fpsvqe/kernels.h"

namespace fpsvqe::kernels {

namespace {

/// Complex product of lane pairs: [u0·v0, u1·v1] with u given as broadcast real and imaginary parts.
inline __m256d cmul(__m256d ur, __m256d ui, __m256d v) {
    __m256d swapped = _mm256_permute_pd(v, 0b0101);
    return _mm256_fmaddsub_pd(ur, v, _mm256_mul_pd(ui, swapped));
}

inline double parity_sign(uint64_t v) {
    return (std::popcount(v) & 1) ? -1.0 : 1.0;
}

cplx pauli_expectation_avx2(const cplx *amps, size_t n, uint64_t x, uint64_t z) {
    if (n < 2) {
        return scalar().pauli_expectation(amps, n, x, z);
    }
    const double *a = reinterpret_cast<const double *>(amps);
    const double odd_flip = (z & 1) ? -1.0 : 1.0;
    __m256d acc_re = _mm256_setzero_pd();
    __m256d acc_im = _mm256_setzero_pd();
    for (size_t j = 0; j < n; j += 2) {
        __m256d av = _mm256_loadu_pd(a + 2 * j);
        size_t partner = (j ^ x) & ~size_t{1};
        __m256d pv = _mm256_loadu_pd(a + 2 * partner);
        if (x & 1) {
            pv = _mm256_permute2f128_pd(pv, pv, 1);
        }
        double s0 = parity_sign(j & z);
        __m256d sign = _mm256_setr_pd(s0, s0, s0 * odd_flip, s0 * odd_flip);
        __m256d ps = _mm256_mul_pd(pv, sign);
        // conj(p)·a = (pr ar + pi ai) + i (pr ai − pi ar)
        acc_re = _mm256_fmadd_pd(ps, av, acc_re);
        acc_im = _mm256_fmadd_pd(ps, _mm256_permute_pd(av, 0b0101), acc_im);
    }
    alignas(32) double re[4];
    alignas(32) double im[4];
    _mm256_store_pd(re, acc_re);
    _mm256_store_pd(im, acc_im);
    return {re[0] + re[1] + re[2] + re[3], im[0] - im[1] + im[2] - im[3]};
}

void apply_single_qubit_avx2(cplx *amps, size_t n, uint64_t bit, const cplx *m) {
    if (n < 2) {
        scalar().apply_single_qubit(amps, n, bit, m);
        return;
    }
    double *a = reinterpret_cast<double *>(amps);
    if (bit == 1) {
        // Both halves of a pair share one register: out = diag ⊙ v + off ⊙ swap_lanes(v).
        __m256d dr = _mm256_setr_pd(m[0].real(), m[0].real(), m[3].real(), m[3].real());
        __m256d di = _mm256_setr_pd(m[0].imag(), m[0].imag(), m[3].imag(), m[3].imag());
        __m256d orr = _mm256_setr_pd(m[1].real(), m[1].real(), m[2].real(), m[2].real());
        __m256d oi = _mm256_setr_pd(m[1].imag(), m[1].imag(), m[2].imag(), m[2].imag());
        for (size_t i = 0; i < n; i += 2) {
            __m256d v = _mm256_loadu_pd(a + 2 * i);
            __m256d w = _mm256_permute2f128_pd(v, v, 1);
            _mm256_storeu_pd(a + 2 * i, _mm256_add_pd(cmul(dr, di, v), cmul(orr, oi, w)));
        }
        return;
    }
    __m256d m0r = _mm256_set1_pd(m[0].real()), m0i = _mm256_set1_pd(m[0].imag());
    __m256d m1r = _mm256_set1_pd(m[1].real()), m1i = _mm256_set1_pd(m[1].imag());
    __m256d m2r = _mm256_set1_pd(m[2].real()), m2i = _mm256_set1_pd(m[2].imag());
    __m256d m3r = _mm256_set1_pd(m[3].real()), m3i = _mm256_set1_pd(m[3].imag());
    for (size_t base = 0; base < n; base += 2 * bit) {
        for (size_t i = base; i < base + bit; i += 2) {
            __m256d v0 = _mm256_loadu_pd(a + 2 * i);
            __m256d v1 = _mm256_loadu_pd(a + 2 * (i + bit));
            _mm256_storeu_pd(a + 2 * i, _mm256_add_pd(cmul(m0r, m0i, v0), cmul(m1r, m1i, v1)));
            _mm256_storeu_pd(a + 2 * (i + bit), _mm256_add_pd(cmul(m2r, m2i, v0), cmul(m3r, m3i, v1)));
        }
    }
}

void abs2_avx2(const cplx *amps, size_t n, double *out) {
    const double *a = reinterpret_cast<const double *>(amps);
    size_t j = 0;
    for (; j + 4 <= n; j += 4) {
        __m256d v0 = _mm256_loadu_pd(a + 2 * j);
        __m256d v1 = _mm256_loadu_pd(a + 2 * j + 4);
        // hadd gives [p0, p2, p1, p3]; restore order.
        __m256d h = _mm256_hadd_pd(_mm256_mul_pd(v0, v0), _mm256_mul_pd(v1, v1));
        _mm256_storeu_pd(out + j, _mm256_permute4x64_pd(h, 0b11011000));
    }
    for (; j < n; j++) {
        out[j] = std::norm(amps[j]);
    }
}

const KernelTable kAvx2{"avx2", pauli_expectation_avx2, apply_single_qubit_avx2, abs2_avx2};

}  // namespace

const KernelTable *avx2() {
    static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return supported ? &kAvx2 : nullptr;
}

}  // namespace fpsvqe::kernels
