#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace fpsvqe {

/// One step of the splitmix64 generator.
inline uint64_t splitmix64(uint64_t &state) {
    uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Seed of stream `index` under `master`: splitmix64 applied to master ⊕ splitmix64(index).
/// Distinct indices give statistically independent streams; the mapping is fixed.
inline uint64_t derive_seed(uint64_t master, uint64_t index) {
    uint64_t s = index;
    uint64_t mixed = master ^ splitmix64(s);
    return splitmix64(mixed);
}

using Rng = std::mt19937_64;

inline Rng make_rng(uint64_t seed) {
    uint64_t s = seed;
    std::seed_seq seq{uint32_t(splitmix64(s)), uint32_t(splitmix64(s)), uint32_t(splitmix64(s)),
                      uint32_t(splitmix64(s))};
    return Rng(seq);
}

/// Uniform double in [0, 1) from the top 53 bits.
inline double uniform01(Rng &rng) {
    return double(rng() >> 11) * 0x1.0p-53;
}

/// Multinomial counts of `shots` draws from `probabilities` by sequential binomials.
std::vector<uint64_t> sample_counts(std::span<const double> probabilities, uint64_t shots, Rng &rng);

/// `shots` individual outcomes drawn from `probabilities`.
std::vector<uint64_t> sample_outcomes(std::span<const double> probabilities, uint64_t shots, Rng &rng);

}  // namespace fpsvqe
