#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

#include "fpsvqe/chain.h"
#include "oracles.h"

using namespace fpsvqe;

namespace {

double lambda1(const ChainSpec &chain, const KeptCounts &kept) {
    auto basis = build_composite_basis(chain, kept);
    return reference_spectrum(build_chain_matrix(basis)).values[0];
}

ChainSpec three_rotors(double reactive) {
    return ChainSpec::rotor_chain(2, reactive, 1.0);
}

}  // namespace

TEST(CompositeBasis, SizesOfTheLadder) {
    struct Case {
        KeptCounts kept;
        size_t j, q;
    };
    for (const auto &c : {Case{{4, 2}, 4, 2}, Case{{4, 4}, 8, 3}, Case{{8, 4}, 16, 4}}) {
        auto basis = build_composite_basis(three_rotors(0.5), c.kept);
        EXPECT_EQ(basis.size(), c.j);
        EXPECT_EQ(basis.qubit_count, c.q);
        EXPECT_EQ(basis.register_size(), size_t{1} << c.q);
    }
}

TEST(CompositeBasis, SingleBistableDihedral) {
    ChainSpec chain{{{PotentialKind::BiStable, 1.0}}, {1.0, 1.0}};
    auto basis = build_composite_basis(chain, {4});
    ASSERT_EQ(basis.size(), 2u);
    EXPECT_EQ(basis.qubit_count, 1u);
    EXPECT_EQ(basis.states[0], std::vector<size_t>{1});
    EXPECT_EQ(basis.states[1], std::vector<size_t>{3});
    for (const auto &s : basis.states) {
        EXPECT_EQ(basis.per_dihedral[0].kept_parity(s[0]), -1);
    }
}

TEST(CompositeBasis, OddParityPinnedFirstStateAndNoDuplicates) {
    for (const auto &kept : rotor_chain_ladder()) {
        auto basis = build_composite_basis(three_rotors(1.0), kept);
        EXPECT_EQ(basis.states[0], (std::vector<size_t>{1, 0}));
        std::set<std::vector<size_t>> seen;
        for (const auto &s : basis.states) {
            int p = 1;
            for (size_t k = 0; k < s.size(); k++) {
                ASSERT_LT(s[k], kept[k]);
                p *= basis.per_dihedral[k].kept_parity(s[k]);
            }
            EXPECT_EQ(p, -1);
            EXPECT_TRUE(seen.insert(s).second);
        }
        // Parity-balanced factors: exactly half of the products are odd.
        EXPECT_EQ(basis.size(), kept[0] * kept[1] / 2);
    }
}

TEST(CompositeBasis, LadderPrefixProperty) {
    auto ladder = rotor_chain_ladder();
    for (double reactive : {0.5, 3.0}) {
        for (size_t a = 0; a + 1 < ladder.size(); a++) {
            auto small = build_composite_basis(three_rotors(reactive), ladder[a]);
            auto large = build_composite_basis(three_rotors(reactive), ladder[a + 1]);
            ASSERT_LE(small.size(), large.size());
            for (size_t i = 0; i < small.size(); i++) {
                EXPECT_EQ(small.states[i], large.states[i]);
            }
        }
    }
}

TEST(CompositeBasis, RejectsInvalidCounts) {
    EXPECT_THROW(build_composite_basis(three_rotors(0.5), {4}), std::invalid_argument);
    EXPECT_THROW(build_composite_basis(three_rotors(0.5), {1, 2}), std::invalid_argument);
    EXPECT_THROW(build_composite_basis(three_rotors(0.5), {4, 0}), std::invalid_argument);
    EXPECT_THROW(build_composite_basis(three_rotors(0.5), {40, 2}), std::invalid_argument);
}

TEST(QubitsFor, CeilLog2) {
    EXPECT_EQ(qubits_for(1), 1u);
    EXPECT_EQ(qubits_for(2), 1u);
    EXPECT_EQ(qubits_for(3), 2u);
    EXPECT_EQ(qubits_for(4), 2u);
    EXPECT_EQ(qubits_for(5), 3u);
    EXPECT_EQ(qubits_for(16), 4u);
    EXPECT_EQ(qubits_for(17), 5u);
}

TEST(ChainMatrix, ReferenceEigenvaluesOfTheThreeRotorChain) {
    struct Case {
        KeptCounts kept;
        double reactive, expect;
    };
    for (const auto &c : {Case{{4, 2}, 0.5, 1.51562}, Case{{4, 4}, 0.5, 1.47537}, Case{{8, 4}, 0.5, 1.47531},
                          Case{{4, 2}, 3.0, 0.33310}}) {
        double l = lambda1(three_rotors(c.reactive), c.kept);
        EXPECT_NEAR(l, c.expect, 5e-4 * c.expect);
    }
}

TEST(ChainMatrix, SymmetricAndPositiveOnOddSector) {
    for (const auto &kept : rotor_chain_ladder()) {
        for (double reactive : {0.0, 0.5, 3.0}) {
            auto m = build_chain_matrix(build_composite_basis(three_rotors(reactive), kept));
            EXPECT_LE(m.asymmetry(), 1e-12);
            auto es = reference_spectrum(m);
            EXPECT_GT(es.values.front(), 0.0);
        }
    }
}

TEST(ChainMatrix, UncoupledSpectrumIsTensorSum) {
    for (double reactive : {0.5, 3.0}) {
        auto basis = build_composite_basis(three_rotors(reactive), {8, 4});
        auto m = build_chain_matrix(basis, {.include_coupling = false});
        for (size_t r = 0; r < m.rows(); r++) {
            double expect = 0;
            for (size_t k = 0; k < 2; k++) {
                expect += basis.per_dihedral[k].kept_eigenvalue(basis.states[r][k]);
            }
            for (size_t c = 0; c < m.cols(); c++) {
                EXPECT_NEAR(m(r, c), r == c ? expect : 0.0, 1e-12);
            }
        }
    }
}

TEST(ChainMatrix, FreeRotorsGiveSmallestOddTensorSum) {
    // Both dihedral prefactors are D+D = 2, so the single-rotor levels are 2n² with cos even and sin odd.
    for (const auto &kept : rotor_chain_ladder()) {
        auto m = build_chain_matrix(build_composite_basis(ChainSpec::rotor_chain(2, 0.0, 0.0), kept));
        auto levels = oracle::free_rotor_levels(2.0, 8);
        // Interleaved retained order: r-th even level at 2r, r-th odd level at 2r+1.
        std::vector<oracle::FreeLevel> even, odd;
        for (auto &l : levels) {
            (l.parity > 0 ? even : odd).push_back(l);
        }
        double best = std::numeric_limits<double>::infinity();
        for (size_t a = 0; a < kept[0]; a++) {
            auto la = a % 2 ? odd[a / 2] : even[a / 2];
            for (size_t b = 0; b < kept[1]; b++) {
                auto lb = b % 2 ? odd[b / 2] : even[b / 2];
                if (la.parity * lb.parity < 0) {
                    best = std::min(best, la.value + lb.value);
                }
            }
        }
        EXPECT_NEAR(reference_spectrum(m).values[0], best, 1e-10);
    }
}

TEST(ChainMatrix, NearestNeighbourSparsity) {
    ChainSpec chain = ChainSpec::rotor_chain(3, 1.0, 1.0);
    KeptCounts kept = {4, 2, 2};
    auto basis = build_composite_basis(chain, kept, {}, {kept});
    auto m = build_chain_matrix(basis);
    size_t checked = 0;
    for (size_t r = 0; r < basis.size(); r++) {
        for (size_t c = 0; c < basis.size(); c++) {
            std::vector<size_t> diff;
            for (size_t k = 0; k < 3; k++) {
                if (basis.states[r][k] != basis.states[c][k]) {
                    diff.push_back(k);
                }
            }
            bool adjacent = diff.size() <= 1 || (diff.size() == 2 && diff[1] == diff[0] + 1);
            if (!adjacent) {
                EXPECT_EQ(m(r, c), 0.0);
                checked++;
            }
        }
    }
    EXPECT_GT(checked, 0u);
}

TEST(ChainMatrix, SmallerBasisIsLeadingBlock) {
    auto ladder = rotor_chain_ladder();
    for (double reactive : {0.5, 1.5, 3.0}) {
        for (size_t a = 0; a + 1 < ladder.size(); a++) {
            auto small = build_chain_matrix(build_composite_basis(three_rotors(reactive), ladder[a]));
            auto large = build_chain_matrix(build_composite_basis(three_rotors(reactive), ladder[a + 1]));
            EXPECT_LE(max_abs_difference(small, large.leading_block(small.rows())), 1e-10);
        }
    }
}

TEST(ChainMatrix, BarrierMonotonicityAndGap) {
    double prev = std::numeric_limits<double>::infinity();
    for (double reactive : {0.5, 1.0, 1.5, 2.0, 2.5, 3.0}) {
        double l = lambda1(three_rotors(reactive), {4, 2});
        EXPECT_LT(l, prev);
        prev = l;
    }
    auto es = reference_spectrum(build_chain_matrix(build_composite_basis(three_rotors(3.0), {4, 2})));
    EXPECT_GT(es.values[1] / es.values[0], 5.0);
}

TEST(ChainMatrix, DiffusionEntersPrefactors) {
    // Doubling every diffusion coefficient doubles every rate.
    ChainSpec chain = three_rotors(1.0);
    for (double &d : chain.diffusion) {
        d = 2.0;
    }
    EXPECT_NEAR(lambda1(chain, {4, 2}), 2 * lambda1(three_rotors(1.0), {4, 2}), 1e-10);
}

TEST(Padding, PenaltyKeepsSpuriousStatesAbove) {
    auto m = build_chain_matrix(build_composite_basis(three_rotors(0.5), {4, 2}));
    Matrix small = m.leading_block(3);
    auto padded = pad_to_register(small, 2);
    ASSERT_EQ(padded.rows(), 4u);
    double bound = gershgorin_upper_bound(small);
    EXPECT_NEAR(padded(3, 3), 10 * bound, 1e-12);
    for (size_t i = 0; i < 3; i++) {
        EXPECT_EQ(padded(3, i), 0.0);
        EXPECT_EQ(padded(i, 3), 0.0);
    }
    EXPECT_NEAR(reference_spectrum(padded).values[0], reference_spectrum(small).values[0], 1e-12);
    EXPECT_EQ(pad_to_register(m, 2), m);
    EXPECT_THROW(pad_to_register(m, 1), std::invalid_argument);
}

TEST(Gershgorin, BoundsSpectrum) {
    for (const auto &kept : rotor_chain_ladder()) {
        auto m = build_chain_matrix(build_composite_basis(three_rotors(0.5), kept));
        EXPECT_GE(gershgorin_upper_bound(m), reference_spectrum(m).values.back());
    }
}

TEST(Propagate, IdentityAtZeroAndDecayAtLongTimes) {
    auto m = build_chain_matrix(build_composite_basis(three_rotors(0.5), {4, 4}));
    std::vector<double> c0(m.rows());
    for (size_t i = 0; i < c0.size(); i++) {
        c0[i] = std::sin(1.0 + double(i));
    }
    auto same = propagate_distribution(m, c0, 0.0);
    for (size_t i = 0; i < c0.size(); i++) {
        EXPECT_NEAR(same[i], c0[i], 1e-12);
    }
    auto late = propagate_distribution(m, c0, 40.0);
    double norm = 0;
    for (double v : late) {
        norm += v * v;
    }
    EXPECT_LT(std::sqrt(norm), 1e-20);
    EXPECT_THROW(propagate_distribution(m, c0, -1.0), std::invalid_argument);
    c0.pop_back();
    EXPECT_THROW(propagate_distribution(m, c0, 1.0), std::invalid_argument);
}

TEST(Propagate, SlowestModeScalesByItsRate) {
    auto m = build_chain_matrix(build_composite_basis(three_rotors(3.0), {4, 2}));
    auto es = reference_spectrum(m);
    std::vector<double> v1(m.rows());
    for (size_t i = 0; i < v1.size(); i++) {
        v1[i] = es.vectors(i, 0);
    }
    auto out = propagate_distribution(es, v1, 1.0);
    for (size_t i = 0; i < v1.size(); i++) {
        EXPECT_NEAR(out[i], std::exp(-es.values[0]) * v1[i], 1e-12);
    }
}

TEST(RateConstant, HalfTheEigenvalue) {
    EXPECT_NEAR(rate_constant(0.33310), 0.16655, 1e-15);
    EXPECT_EQ(rate_constant(0.0), 0.0);
    EXPECT_EQ(rate_constant(2.0), 1.0);
    EXPECT_THROW(rate_constant(-0.1), std::invalid_argument);
}

TEST(MatrixIo, TextAndJsonRoundTripExactly) {
    auto m = build_chain_matrix(build_composite_basis(three_rotors(0.5), {8, 4}));
    std::stringstream ss;
    write_matrix_text(ss, m);
    EXPECT_EQ(ss.str().substr(0, ss.str().find('\n')), "16 16");
    EXPECT_EQ(read_matrix_text(ss), m);
    EXPECT_EQ(matrix_from_json(matrix_to_json(m)), m);

    std::istringstream bad("2 2\n1 2\n3\n");
    EXPECT_THROW(read_matrix_text(bad), std::runtime_error);
}
