#include <bit>
#include <cstdlib>
#include <cstring>

#include "fpsvqe/kernels.h"

namespace fpsvqe::kernels {

namespace {

cplx pauli_expectation_scalar(const cplx *amps, size_t n, uint64_t x, uint64_t z) {
    cplx total = 0;
    for (size_t j = 0; j < n; j++) {
        cplx term = std::conj(amps[j ^ x]) * amps[j];
        total += (std::popcount(j & z) & 1) ? -term : term;
    }
    return total;
}

void apply_single_qubit_scalar(cplx *amps, size_t n, uint64_t bit, const cplx *m) {
    for (size_t i = 0; i < n; i++) {
        if (i & bit) {
            continue;
        }
        cplx a0 = amps[i];
        cplx a1 = amps[i | bit];
        amps[i] = m[0] * a0 + m[1] * a1;
        amps[i | bit] = m[2] * a0 + m[3] * a1;
    }
}

void abs2_scalar(const cplx *amps, size_t n, double *out) {
    for (size_t j = 0; j < n; j++) {
        out[j] = std::norm(amps[j]);
    }
}

const KernelTable kScalar{"scalar", pauli_expectation_scalar, apply_single_qubit_scalar, abs2_scalar};

}  // namespace

const KernelTable &scalar() {
    return kScalar;
}

#if !defined(FPSVQE_HAVE_AVX2)
const KernelTable *avx2() {
    return nullptr;
}
#endif

const KernelTable &active() {
    static const KernelTable &chosen = []() -> const KernelTable & {
        const char *forced = std::getenv("FPSVQE_KERNELS");
        if (forced != nullptr && std::strcmp(forced, "scalar") == 0) {
            return kScalar;
        }
        if (const KernelTable *t = avx2()) {
            return *t;
        }
        return kScalar;
    }();
    return chosen;
}

}  // namespace fpsvqe::kernels
