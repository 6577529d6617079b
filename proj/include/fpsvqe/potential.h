#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fpsvqe {

/// Shape of a dihedral potential. Barriers are in units of k_B T.
enum class PotentialKind {
    /// U(θ) = (Δ/2)(1 − cos θ): a single minimum at θ = 0.
    MonoStable,
    /// U(θ) = (Δ/2)(cos 2θ + 1): minima at θ = ±π/2 separated by barriers at 0 and π.
    BiStable,
};

std::string_view to_string(PotentialKind kind);
PotentialKind parse_potential_kind(std::string_view text);

struct DihedralSpec {
    PotentialKind kind = PotentialKind::MonoStable;
    double barrier = 0.0;

    void validate() const;
};

/// A chain of N+1 rotors: N dihedral potentials and N+1 rotor diffusion coefficients.
struct ChainSpec {
    std::vector<DihedralSpec> dihedrals;
    std::vector<double> diffusion;

    size_t num_dihedrals() const {
        return dihedrals.size();
    }
    void validate() const;

    /// Bi-stable first dihedral, mono-stable remaining ones, all diffusion coefficients 1.
    static ChainSpec rotor_chain(size_t num_dihedrals, double reactive_barrier, double nonreactive_barrier);
};

/// A truncated Fourier series a_0 + Σ_n [a_n cos(nθ) + b_n sin(nθ)].
struct TrigSeries {
    std::vector<double> cos_coef;  // index n, n = 0..max_harmonic
    std::vector<double> sin_coef;  // index n; sin_coef[0] is unused and zero

    size_t max_harmonic() const {
        return cos_coef.empty() ? 0 : cos_coef.size() - 1;
    }
    double operator()(double theta) const;
};

double potential_value(const DihedralSpec &spec, double theta);
double potential_d1(const DihedralSpec &spec, double theta);
double potential_d2(const DihedralSpec &spec, double theta);

/// Unnormalized exp(−Σ_k U_k(θ_k)).
double boltzmann_weight(const ChainSpec &chain, std::span<const double> thetas);

/// Exact Fourier series for U, U′ and the effective term U″/2 − U′²/4.
TrigSeries potential_series(const DihedralSpec &spec);
TrigSeries potential_d1_series(const DihedralSpec &spec);
TrigSeries effective_potential_series(const DihedralSpec &spec);

/// ∫₀^{2π} exp(−U(θ)) dθ by the periodic trapezoid rule.
double single_partition_function(const DihedralSpec &spec, size_t points = 2048);

}  // namespace fpsvqe
