#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "fpsvqe/chain.h"
#include "fpsvqe/driver.h"
#include "fpsvqe/estimator.h"
#include "fpsvqe/kernels.h"
#include "fpsvqe/pauli.h"
#include "fpsvqe/random.h"
#include "fpsvqe/statevector.h"
#include "oracles.h"

using namespace fpsvqe;

namespace {

const double kPi = oracle::pi;

std::vector<double> random_params(size_t n, std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> u(0, 2 * kPi);
    std::vector<double> p(n);
    for (auto &x : p) x = u(rng);
    return p;
}

std::vector<cplx> random_amplitudes(size_t dim, std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    std::vector<cplx> a(dim);
    double n = 0;
    for (auto &x : a) {
        x = {g(rng), g(rng)};
        n += std::norm(x);
    }
    for (auto &x : a) x /= std::sqrt(n);
    return a;
}

struct Moments {
    double mean = 0, stddev = 0;
};

Moments moments(const std::vector<double> &v) {
    Moments m;
    m.mean = std::accumulate(v.begin(), v.end(), 0.0) / double(v.size());
    double s = 0;
    for (double x : v) s += (x - m.mean) * (x - m.mean);
    m.stddev = std::sqrt(s / double(v.size() - 1));
    return m;
}

/// The Q=2 problem and best parameters of a single exact-mode optimization.
struct Converged {
    Problem problem;
    std::vector<double> params;
};

const Converged &converged_q2() {
    static const Converged c = [] {
        VqeConfig cfg;
        cfg.estimator.mode = EstimateMode::Exact;
        Problem p = build_problem(cfg);
        VqeRun best;
        best.lambda_exact = 1e9;
        for (uint64_t i = 0; i < 4; i++) {
            auto r = run_vqe(cfg, p, i);
            if (r.lambda_exact < best.lambda_exact) best = r;
        }
        return Converged{p, best.trace.best_params};
    }();
    return c;
}

std::vector<double> repeat(size_t reps, const std::function<double(uint64_t)> &f) {
    std::vector<double> out;
    for (size_t i = 0; i < reps; i++) out.push_back(f(derive_seed(99, i)));
    return out;
}

}  // namespace

TEST(Kernels, AvxMatchesScalar) {
    const auto *fast = kernels::avx2();
    if (!fast) GTEST_SKIP() << "AVX2 kernels unavailable on this host";
    const auto &ref = kernels::scalar();
    std::mt19937_64 rng(5);
    for (size_t q = 1; q <= 10; q++) {
        size_t n = size_t{1} << q;
        auto a = random_amplitudes(n, rng);
        for (int t = 0; t < 20; t++) {
            uint64_t x = rng() % n, z = rng() % n;
            cplx e1 = ref.pauli_expectation(a.data(), n, x, z);
            cplx e2 = fast->pauli_expectation(a.data(), n, x, z);
            EXPECT_NEAR(std::abs(e1 - e2), 0, 1e-12);
        }
        auto m4 = random_amplitudes(4, rng);
        for (size_t k = 0; k < q; k++) {
            auto b1 = a, b2 = a;
            ref.apply_single_qubit(b1.data(), n, uint64_t{1} << k, m4.data());
            fast->apply_single_qubit(b2.data(), n, uint64_t{1} << k, m4.data());
            for (size_t i = 0; i < n; i++) EXPECT_NEAR(std::abs(b1[i] - b2[i]), 0, 1e-12);
        }
        std::vector<double> p1(n), p2(n);
        ref.abs2(a.data(), n, p1.data());
        fast->abs2(a.data(), n, p2.data());
        for (size_t i = 0; i < n; i++) EXPECT_NEAR(p1[i], p2[i], 1e-15);
    }
}

TEST(Kernels, ActiveTableIsOneOfTheImplementations) {
    const auto &k = kernels::active();
    EXPECT_TRUE(&k == &kernels::scalar() || &k == kernels::avx2());
}

TEST(StateVector, QubitZeroIsMostSignificant) {
    StateVector s(3);
    s.apply_ry(0, kPi);
    auto p = s.probabilities();
    EXPECT_NEAR(p[4], 1.0, 1e-15);
    s.apply_cnot(0, 2);
    EXPECT_NEAR(s.probabilities()[5], 1.0, 1e-15);
    EXPECT_EQ(qubit_bit(3, 0), 4u);
}

TEST(StateVector, GatesAgreeWithDenseMatrices) {
    std::mt19937_64 rng(1);
    for (size_t q = 1; q <= 3; q++) {
        auto a = random_amplitudes(size_t{1} << q, rng);
        for (size_t k = 0; k < q; k++) {
            for (int g = 0; g < 3; g++) {
                double t = 0.3 + k + g;
                StateVector s(a);
                oracle::CMatrix m = g == 0 ? oracle::ry(t) : g == 1 ? oracle::rz(t) : oracle::rx(t);
                if (g == 0) s.apply_ry(k, t);
                if (g == 1) s.apply_rz(k, t);
                if (g == 2) s.apply_rx(k, t);
                auto u = oracle::lift(m, k, q);
                for (size_t i = 0; i < a.size(); i++) {
                    cplx expect = 0;
                    for (size_t j = 0; j < a.size(); j++) expect += u[i][j] * a[j];
                    EXPECT_NEAR(std::abs(s.amplitudes()[i] - expect), 0, 1e-13);
                }
            }
        }
    }
}

TEST(StateVector, BadInputsThrow) {
    EXPECT_THROW(StateVector(std::vector<cplx>(3)), std::invalid_argument);
    StateVector s(2);
    EXPECT_THROW(s.apply_cnot(0, 0), std::invalid_argument);
    EXPECT_THROW(s.apply_ry(2, 1.0), std::out_of_range);
}

TEST(Ansatz, ParameterCountAndEntanglers) {
    AnsatzSpec a{4, 2, Entangler::Linear};
    EXPECT_EQ(a.parameter_count(), 24u);
    EXPECT_EQ(a.entangler_pairs(), (std::vector<std::pair<size_t, size_t>>{{0, 1}, {1, 2}, {2, 3}}));
    a.entangler = Entangler::Full;
    EXPECT_EQ(a.entangler_pairs().size(), 6u);
    EXPECT_EQ(a.entangler_pairs().front(), (std::pair<size_t, size_t>{0, 1}));
    EXPECT_EQ(a.entangler_pairs().back(), (std::pair<size_t, size_t>{2, 3}));
    EXPECT_EQ(parse_entangler(to_string(Entangler::Full)), Entangler::Full);
    EXPECT_THROW(parse_entangler("ring"), std::invalid_argument);
}

TEST(Ansatz, ZeroParametersGiveAllZeros) {
    for (auto e : {Entangler::Linear, Entangler::Full}) {
        AnsatzSpec a{3, 2, e};
        auto s = prepare_state(a, std::vector<double>(a.parameter_count(), 0.0));
        EXPECT_NEAR(std::abs(s.amplitudes()[0]), 1.0, 1e-15);
    }
}

TEST(Ansatz, SingleQubitFlip) {
    AnsatzSpec a{1, 0, Entangler::Linear};
    std::vector<double> p = {kPi, 0.0};
    auto s = prepare_state(a, p);
    EXPECT_NEAR(std::abs(s.amplitudes()[1]), 1.0, 1e-15);
    EXPECT_THROW(prepare_state(a, std::vector<double>(3, 0.0)), std::invalid_argument);
}

TEST(Ansatz, MatchesDenseUnitaryOracleAndStaysNormalized) {
    std::mt19937_64 rng(21);
    for (size_t q = 1; q <= 4; q++) {
        for (size_t d = 0; d <= 2; d++) {
            for (auto e : {Entangler::Linear, Entangler::Full}) {
                AnsatzSpec a{q, d, e};
                auto p = random_params(a.parameter_count(), rng);
                auto s = prepare_state(a, p);
                auto o = oracle::ansatz_state(q, d, e == Entangler::Full, p);
                EXPECT_NEAR(s.norm(), 1.0, 1e-12);
                for (size_t i = 0; i < o.size(); i++) {
                    EXPECT_NEAR(std::abs(s.amplitudes()[i] - o[i]), 0, 1e-12);
                }
            }
        }
    }
}

TEST(Ansatz, EmbeddingPrependsIdleQubit) {
    std::mt19937_64 rng(8);
    for (size_t q = 1; q <= 3; q++) {
        for (auto e : {Entangler::Linear, Entangler::Full}) {
            AnsatzSpec small{q, 1, e}, large{q + 1, 1, e};
            auto p = random_params(small.parameter_count(), rng);
            auto big = embed_parameters(small, p);
            ASSERT_EQ(big.size(), large.parameter_count());
            auto a = prepare_state(small, p), b = prepare_state(large, big);
            for (size_t i = 0; i < b.dimension(); i++) {
                cplx expect = i < a.dimension() ? a.amplitudes()[i] : cplx(0);
                EXPECT_NEAR(std::abs(b.amplitudes()[i] - expect), 0, 1e-13);
            }
        }
    }
    EXPECT_THROW(embed_parameters({2, 1, Entangler::Linear}, std::vector<double>(3)), std::invalid_argument);
}

TEST(Ansatz, EmbeddedStateReproducesSmallerChainValue) {
    auto chain = ChainSpec::rotor_chain(2, 0.5, 1.0);
    auto b2 = build_composite_basis(chain, {4, 2});
    auto b3 = build_composite_basis(chain, {4, 4});
    auto op2 = map_operator(pad_to_register(build_chain_matrix(b2), 2));
    auto op3 = map_operator(pad_to_register(build_chain_matrix(b3), 3));
    std::mt19937_64 rng(4);
    AnsatzSpec small{2, 1, Entangler::Linear};
    for (int t = 0; t < 20; t++) {
        auto p = random_params(small.parameter_count(), rng);
        double v2 = exact_expectation(prepare_state(small, p), op2);
        double v3 = exact_expectation(prepare_state({3, 1, Entangler::Linear}, embed_parameters(small, p)), op3);
        EXPECT_NEAR(v3, v2, 1e-10);
    }
}

TEST(Exact, ElementaryExpectations) {
    PauliOperator z(1), x(1);
    z.add(PauliString::parse("Z"), 1.0);
    x.add(PauliString::parse("X"), 1.0);
    EXPECT_NEAR(exact_expectation(StateVector(1), z), 1.0, 1e-15);
    StateVector plus(1);
    plus.apply_ry(0, kPi / 2);
    EXPECT_NEAR(exact_expectation(plus, x), 1.0, 1e-15);
    EXPECT_THROW(exact_expectation(StateVector(2), z), std::invalid_argument);
}

TEST(Exact, EigenvectorGivesReferenceValue) {
    auto basis = build_composite_basis(ChainSpec::rotor_chain(2, 0.5, 1.0), {4, 2});
    auto m = pad_to_register(build_chain_matrix(basis), 2);
    auto es = reference_spectrum(m);
    std::vector<cplx> v(4);
    for (size_t i = 0; i < 4; i++) v[i] = es.vectors(i, 0);
    double e = exact_expectation(StateVector(v), map_operator(m));
    EXPECT_NEAR(e, 1.51562, 5e-4 * 1.51562);
    EXPECT_NEAR(e, es.values[0], 1e-12);
}

TEST(Exact, MappingAndSimulatorShareBitOrder) {
    // ⟨ψ|M|ψ⟩ from the matrix directly must equal the Pauli-operator expectation.
    std::mt19937_64 rng(17);
    for (const auto &kept : rotor_chain_ladder()) {
        auto basis = build_composite_basis(ChainSpec::rotor_chain(2, 1.0, 1.0), kept);
        auto m = pad_to_register(build_chain_matrix(basis), basis.qubit_count);
        auto op = map_operator(m);
        for (int t = 0; t < 10; t++) {
            auto a = random_amplitudes(m.rows(), rng);
            cplx direct = 0;
            for (size_t i = 0; i < m.rows(); i++)
                for (size_t j = 0; j < m.cols(); j++) direct += std::conj(a[i]) * m(i, j) * a[j];
            EXPECT_NEAR(exact_expectation(StateVector(a), op), direct.real(), 1e-11);
        }
    }
}

TEST(Exact, VariationalBoundOnRandomStates) {
    std::mt19937_64 rng(31);
    for (const auto &kept : rotor_chain_ladder()) {
        auto basis = build_composite_basis(ChainSpec::rotor_chain(2, 0.5, 1.0), kept);
        auto m = pad_to_register(build_chain_matrix(basis), basis.qubit_count);
        double ref = reference_spectrum(m).values[0];
        auto op = map_operator(m);
        for (int t = 0; t < 200; t++) {
            EXPECT_GE(exact_expectation(StateVector(random_amplitudes(m.rows(), rng)), op), ref - 1e-9);
        }
    }
}

TEST(Sampled, IdentityOnlyIsExact) {
    PauliOperator op(2);
    op.add(PauliString::parse("II"), 1.25);
    AnsatzSpec a{2, 1, Entangler::Linear};
    auto e = sampled_expectation(a, std::vector<double>(8, 0.3), op, 100, false, 1);
    EXPECT_EQ(e.value, 1.25);
    EXPECT_EQ(e.std_error, 0.0);
    EXPECT_EQ(e.mode, EstimateMode::Sampled);
}

TEST(Sampled, ExactModeHasNoError) {
    const auto &c = converged_q2();
    ExpectationEvaluator ev(c.problem.ansatz, c.problem.op, EstimatorConfig{});
    Rng rng = make_rng(1);
    auto e = ev.evaluate(c.params, rng);
    EXPECT_EQ(e.std_error, 0.0);
    EXPECT_EQ(e.mode, EstimateMode::Exact);
    EXPECT_EQ(e.value, ev.exact(c.params));
}

TEST(Sampled, UnbiasedAtTwentyThousandShots) {
    const auto &c = converged_q2();
    double exact = exact_expectation(prepare_state(c.problem.ansatz, c.params), c.problem.op);
    for (bool grouping : {false, true}) {
        std::vector<double> se;
        auto v = repeat(100, [&](uint64_t seed) {
            auto e = sampled_expectation(c.problem.ansatz, c.params, c.problem.op, 20000, grouping, seed);
            se.push_back(e.std_error);
            return e.value;
        });
        auto m = moments(v);
        double mean_se = std::accumulate(se.begin(), se.end(), 0.0) / double(se.size());
        EXPECT_LT(std::abs(m.mean - exact), 3 * m.stddev / std::sqrt(100.0));
        // The reported standard error describes the spread of single estimates.
        EXPECT_NEAR(mean_se / m.stddev, 1.0, 0.25);
    }
}

TEST(Sampled, SpreadFollowsInverseRootShots) {
    const auto &c = converged_q2();
    auto at = [&](uint64_t shots) {
        return moments(repeat(200, [&](uint64_t seed) {
                   return sampled_expectation(c.problem.ansatz, c.params, c.problem.op, shots, false, seed).value;
               }))
            .stddev;
    };
    double ratio = at(5000) / at(20000);
    EXPECT_NEAR(ratio, 2.0, 0.4);
}

TEST(Sampled, DeterministicForSeedAndCountsShots) {
    const auto &c = converged_q2();
    auto a = sampled_expectation(c.problem.ansatz, c.params, c.problem.op, 1000, true, 5);
    auto b = sampled_expectation(c.problem.ansatz, c.params, c.problem.op, 1000, true, 5);
    EXPECT_EQ(a.value, b.value);
    size_t groups = group_qubitwise_commuting(c.problem.op).size();
    EXPECT_EQ(a.shots_used, 1000 * groups);
}

TEST(Noisy, ZeroNoiseMatchesSampling) {
    const auto &c = converged_q2();
    NoiseSpec none;
    auto s = moments(repeat(200, [&](uint64_t seed) {
        return sampled_expectation(c.problem.ansatz, c.params, c.problem.op, 5000, false, seed).value;
    }));
    auto n = moments(repeat(200, [&](uint64_t seed) {
        return noisy_expectation(c.problem.ansatz, c.params, c.problem.op, 5000, none, true, seed ^ 0xABCD).value;
    }));
    double z = (n.mean - s.mean) / std::sqrt((s.stddev * s.stddev + n.stddev * n.stddev) / 200);
    EXPECT_LT(std::abs(z), 2.576);
    // Log-variance ratio, approximately normal with variance 4/(n−1).
    double zv = std::log(n.stddev * n.stddev / (s.stddev * s.stddev)) / std::sqrt(4.0 / 199);
    EXPECT_LT(std::abs(zv), 2.576);
}

TEST(Noisy, DeviceMagnitudesShiftUpAndBroaden) {
    const auto &c = converged_q2();
    auto noise = NoiseSpec::santiago_like();
    auto s = moments(repeat(200, [&](uint64_t seed) {
        return sampled_expectation(c.problem.ansatz, c.params, c.problem.op, 20000, false, seed).value;
    }));
    auto n = moments(repeat(200, [&](uint64_t seed) {
        return noisy_expectation(c.problem.ansatz, c.params, c.problem.op, 20000, noise, true, seed ^ 0x77).value;
    }));
    double z = (n.mean - s.mean) / std::sqrt((s.stddev * s.stddev + n.stddev * n.stddev) / 200);
    EXPECT_GT(z, 2.326);
    EXPECT_GT(std::log(n.stddev * n.stddev / (s.stddev * s.stddev)) / std::sqrt(4.0 / 199), 2.326);
}

TEST(Noisy, MitigationRemovesPureReadoutError) {
    const auto &c = converged_q2();
    double exact = exact_expectation(prepare_state(c.problem.ansatz, c.params), c.problem.op);
    NoiseSpec readout;
    readout.readout = {ReadoutError{0.03, 0.05}};
    std::vector<double> se;
    auto v = repeat(100, [&](uint64_t seed) {
        auto e = noisy_expectation(c.problem.ansatz, c.params, c.problem.op, 20000, readout, true, seed);
        se.push_back(e.std_error);
        return e.value;
    });
    auto m = moments(v);
    EXPECT_LT(std::abs(m.mean - exact), 2 * m.stddev / std::sqrt(100.0));

    // Without mitigation the same data are visibly biased.
    auto raw = moments(repeat(100, [&](uint64_t seed) {
        return noisy_expectation(c.problem.ansatz, c.params, c.problem.op, 20000, readout, false, seed).value;
    }));
    EXPECT_GT(std::abs(raw.mean - exact), 5 * raw.stddev / std::sqrt(100.0));
}

TEST(Readout, MitigationInvertsConfusion) {
    NoiseSpec n;
    n.readout = {ReadoutError{0.02, 0.04}, ReadoutError{0.1, 0.0}, ReadoutError{0.05, 0.05}};
    std::vector<double> p = {0.3, 0.1, 0.05, 0.05, 0.2, 0.1, 0.15, 0.05};
    auto measured = apply_readout(p, n, 3);
    EXPECT_NEAR(std::accumulate(measured.begin(), measured.end(), 0.0), 1.0, 1e-14);
    auto back = mitigate_readout(measured, n, 3);
    for (size_t i = 0; i < p.size(); i++) EXPECT_NEAR(back[i], p[i], 1e-13);

    // Clipping keeps a valid distribution when inversion overshoots.
    std::vector<double> edge = {1.0, 0, 0, 0, 0, 0, 0, 0};
    auto clipped = mitigate_readout(edge, n, 3);
    for (double x : clipped) EXPECT_GE(x, 0.0);
    EXPECT_NEAR(std::accumulate(clipped.begin(), clipped.end(), 0.0), 1.0, 1e-14);
}

TEST(Readout, SingularConfusionThrows) {
    NoiseSpec n;
    n.readout = {ReadoutError{0.5, 0.5}};
    std::vector<double> f = {0.5, 0.5};
    EXPECT_THROW(mitigate_readout(f, n, 1), std::domain_error);
}

TEST(Readout, ConfusionRowsAreDistributions) {
    ReadoutError r{0.1, 0.3};
    auto c = r.confusion();
    EXPECT_DOUBLE_EQ(c[0][0] + c[0][1], 1.0);
    EXPECT_DOUBLE_EQ(c[1][0] + c[1][1], 1.0);
    EXPECT_EQ(c[0][1], 0.1);
    EXPECT_EQ(c[1][0], 0.3);
}

TEST(NoiseSpec, ValidationAndBroadcast) {
    NoiseSpec n = NoiseSpec::santiago_like();
    EXPECT_NO_THROW(n.validate());
    EXPECT_EQ(n.readout_for(3).p1_given0, 0.02);
    n.p2 = 1.5;
    EXPECT_THROW(n.validate(), std::invalid_argument);
    NoiseSpec per;
    per.readout = {ReadoutError{0.1, 0.1}, ReadoutError{0.2, 0.2}};
    EXPECT_EQ(per.readout_for(1).p1_given0, 0.2);
    EXPECT_THROW(per.readout_for(2), std::invalid_argument);
}

TEST(Measurement, RotationsMapEigenstatesToZero) {
    StateVector plus(1);
    plus.apply_ry(0, kPi / 2);
    for (const auto &g : measurement_rotation(PauliString::parse("X"), 1)) apply_gate(plus, g);
    EXPECT_NEAR(plus.probabilities()[0], 1.0, 1e-14);

    StateVector plus_i(1);
    plus_i.apply_rx(0, -kPi / 2);
    for (const auto &g : measurement_rotation(PauliString::parse("Y"), 1)) apply_gate(plus_i, g);
    EXPECT_NEAR(plus_i.probabilities()[0], 1.0, 1e-14);

    EXPECT_TRUE(measurement_rotation(PauliString::parse("ZIZ"), 3).empty());
}

TEST(Bitstrings, DumpIsMostSignificantFirst) {
    AnsatzSpec a{2, 0, Entangler::Linear};
    std::vector<double> p = {kPi, 0, 0, 0};  // Ry(π) on qubit 0 only: |10⟩
    auto out = sample_bitstrings(a, p, PauliString::parse("ZZ"), 5, 3);
    ASSERT_EQ(out.size(), 5u);
    for (auto b : out) EXPECT_EQ(b, 2u);
    std::ostringstream ss;
    write_bitstrings(ss, out, 2);
    EXPECT_EQ(ss.str(), "10\n10\n10\n10\n10\n");
}

TEST(Bitstrings, FrequenciesFollowBornRule) {
    const auto &c = converged_q2();
    auto probs = prepare_state(c.problem.ansatz, c.params).probabilities();
    auto out = sample_bitstrings(c.problem.ansatz, c.params, PauliString::parse("ZZ"), 40000, 12);
    std::vector<double> f(4, 0);
    for (auto b : out) f[b] += 1.0 / 40000;
    for (size_t i = 0; i < 4; i++) {
        EXPECT_NEAR(f[i], probs[i], 5 * std::sqrt(probs[i] * (1 - probs[i]) / 40000) + 1e-12);
    }
}

TEST(Random, CountsAndSeedsBehave) {
    Rng rng = make_rng(1);
    std::vector<double> p = {0.1, 0.0, 0.6, 0.3};
    auto c = sample_counts(p, 10000, rng);
    EXPECT_EQ(std::accumulate(c.begin(), c.end(), uint64_t{0}), 10000u);
    EXPECT_EQ(c[1], 0u);
    EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
    EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
    EXPECT_EQ(derive_seed(7, 3), derive_seed(7, 3));
    Rng a = make_rng(9), b = make_rng(9);
    EXPECT_EQ(a(), b());
    for (int i = 0; i < 1000; i++) {
        double u = uniform01(a);
        EXPECT_GE(u, 0.0);
        EXPECT_LT(u, 1.0);
    }
}
