#include "fpsvqe/random.h"

#include <algorithm>
#include <numeric>

namespace fpsvqe {

std::vector<uint64_t> sample_counts(std::span<const double> probabilities, uint64_t shots, Rng &rng) {
    std::vector<uint64_t> counts(probabilities.size(), 0);
    double remaining_mass = 0;
    for (double p : probabilities) {
        remaining_mass += std::max(p, 0.0);
    }
    uint64_t remaining = shots;
    for (size_t k = 0; k < probabilities.size() && remaining > 0; k++) {
        double p = std::max(probabilities[k], 0.0);
        if (k + 1 == probabilities.size() || remaining_mass <= 0) {
            counts[k] = remaining;
            remaining = 0;
            break;
        }
        double q = std::clamp(p / remaining_mass, 0.0, 1.0);
        uint64_t draw = 0;
        if (q >= 1.0) {
            draw = remaining;
        } else if (q > 0.0) {
            draw = std::binomial_distribution<uint64_t>(remaining, q)(rng);
        }
        counts[k] = draw;
        remaining -= draw;
        remaining_mass -= p;
    }
    return counts;
}

std::vector<uint64_t> sample_outcomes(std::span<const double> probabilities, uint64_t shots, Rng &rng) {
    std::vector<double> cumulative(probabilities.size());
    std::partial_sum(probabilities.begin(), probabilities.end(), cumulative.begin());
    double total = cumulative.empty() ? 0.0 : cumulative.back();
    std::vector<uint64_t> out;
    out.reserve(shots);
    for (uint64_t s = 0; s < shots; s++) {
        double u = uniform01(rng) * total;
        auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        out.push_back(uint64_t(std::min<size_t>(size_t(it - cumulative.begin()), probabilities.size() - 1)));
    }
    return out;
}

}  // namespace fpsvqe
