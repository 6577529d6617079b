#include "fpsvqe/potential.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fpsvqe {

std::string_view to_string(PotentialKind kind) {
    switch (kind) {
        case PotentialKind::MonoStable:
            return "monostable";
        case PotentialKind::BiStable:
            return "bistable";
    }
    return "unknown";
}

PotentialKind parse_potential_kind(std::string_view text) {
    if (text == "monostable" || text == "mono" || text == "nr") {
        return PotentialKind::MonoStable;
    }
    if (text == "bistable" || text == "bi" || text == "r") {
        return PotentialKind::BiStable;
    }
    throw std::invalid_argument("unknown potential kind '" + std::string(text) + "'");
}

void DihedralSpec::validate() const {
    if (!(barrier >= 0.0) || !std::isfinite(barrier)) {
        throw std::invalid_argument("dihedral barrier must be finite and >= 0");
    }
}

void ChainSpec::validate() const {
    if (dihedrals.empty()) {
        throw std::invalid_argument("chain needs at least one dihedral");
    }
    if (diffusion.size() != dihedrals.size() + 1) {
        throw std::invalid_argument(
            "chain with " + std::to_string(dihedrals.size()) + " dihedrals needs " +
            std::to_string(dihedrals.size() + 1) + " diffusion coefficients, got " + std::to_string(diffusion.size()));
    }
    for (const auto &d : dihedrals) {
        d.validate();
    }
    for (double d : diffusion) {
        if (!(d > 0.0) || !std::isfinite(d)) {
            throw std::invalid_argument("diffusion coefficients must be finite and > 0");
        }
    }
}

ChainSpec ChainSpec::rotor_chain(size_t num_dihedrals, double reactive_barrier, double nonreactive_barrier) {
    ChainSpec chain;
    for (size_t k = 0; k < num_dihedrals; k++) {
        if (k == 0) {
            chain.dihedrals.push_back({PotentialKind::BiStable, reactive_barrier});
        } else {
            chain.dihedrals.push_back({PotentialKind::MonoStable, nonreactive_barrier});
        }
    }
    chain.diffusion.assign(num_dihedrals + 1, 1.0);
    return chain;
}

double TrigSeries::operator()(double theta) const {
    double total = 0;
    for (size_t n = 0; n < cos_coef.size(); n++) {
        total += cos_coef[n] * std::cos(double(n) * theta);
        if (n < sin_coef.size()) {
            total += sin_coef[n] * std::sin(double(n) * theta);
        }
    }
    return total;
}

double potential_value(const DihedralSpec &spec, double theta) {
    double h = spec.barrier / 2;
    switch (spec.kind) {
        case PotentialKind::MonoStable:
            return h * (1 - std::cos(theta));
        case PotentialKind::BiStable:
            return h * (std::cos(2 * theta) + 1);
    }
    return 0;
}

double potential_d1(const DihedralSpec &spec, double theta) {
    double h = spec.barrier / 2;
    switch (spec.kind) {
        case PotentialKind::MonoStable:
            return h * std::sin(theta);
        case PotentialKind::BiStable:
            return -2 * h * std::sin(2 * theta);
    }
    return 0;
}

double potential_d2(const DihedralSpec &spec, double theta) {
    double h = spec.barrier / 2;
    switch (spec.kind) {
        case PotentialKind::MonoStable:
            return h * std::cos(theta);
        case PotentialKind::BiStable:
            return -4 * h * std::cos(2 * theta);
    }
    return 0;
}

double boltzmann_weight(const ChainSpec &chain, std::span<const double> thetas) {
    if (thetas.size() != chain.num_dihedrals()) {
        throw std::invalid_argument("boltzmann_weight: one angle per dihedral required");
    }
    double u = 0;
    for (size_t k = 0; k < thetas.size(); k++) {
        u += potential_value(chain.dihedrals[k], thetas[k]);
    }
    return std::exp(-u);
}

namespace {

TrigSeries empty_series(size_t max_harmonic) {
    TrigSeries s;
    s.cos_coef.assign(max_harmonic + 1, 0.0);
    s.sin_coef.assign(max_harmonic + 1, 0.0);
    return s;
}

}  // namespace

TrigSeries potential_series(const DihedralSpec &spec) {
    double h = spec.barrier / 2;
    TrigSeries s = empty_series(2);
    if (spec.kind == PotentialKind::MonoStable) {
        s.cos_coef[0] = h;
        s.cos_coef[1] = -h;
    } else {
        s.cos_coef[0] = h;
        s.cos_coef[2] = h;
    }
    return s;
}

TrigSeries potential_d1_series(const DihedralSpec &spec) {
    double h = spec.barrier / 2;
    TrigSeries s = empty_series(2);
    if (spec.kind == PotentialKind::MonoStable) {
        s.sin_coef[1] = h;
    } else {
        s.sin_coef[2] = -2 * h;
    }
    return s;
}

TrigSeries effective_potential_series(const DihedralSpec &spec) {
    // U″/2 − U′²/4, expanded with sin² x = (1 − cos 2x)/2.
    double d = spec.barrier;
    TrigSeries s = empty_series(4);
    if (spec.kind == PotentialKind::MonoStable) {
        // U′ = (Δ/2) sin θ, U″ = (Δ/2) cos θ.
        s.cos_coef[0] = -d * d / 32;
        s.cos_coef[1] = d / 4;
        s.cos_coef[2] = d * d / 32;
    } else {
        // U′ = −Δ sin 2θ, U″ = −2Δ cos 2θ.
        s.cos_coef[0] = -d * d / 8;
        s.cos_coef[2] = -d;
        s.cos_coef[4] = d * d / 8;
    }
    return s;
}

double single_partition_function(const DihedralSpec &spec, size_t points) {
    double step = 2 * std::numbers::pi / double(points);
    double total = 0;
    for (size_t i = 0; i < points; i++) {
        total += std::exp(-potential_value(spec, step * double(i)));
    }
    return total * step;
}

}  // namespace fpsvqe
