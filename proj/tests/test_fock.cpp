// Copyright 2026 The polarsim Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>

#include <gtest/gtest.h>

#include "polarsim/elements.hpp"
#include "polarsim/errors.hpp"
#include "polarsim/fock.hpp"
#include "polarsim/named_states.hpp"
#include "support.hpp"

namespace polarsim {
namespace {

using testing::kTol;
const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

FockBasisVector ket(std::initializer_list<const char*> tokens) {
    FockBasisVector v;
    for (const char* t : tokens) v.modes.push_back(parse_occupancy(t));
    return v;
}

TEST(Occupancy, ParsesTokens) {
    EXPECT_EQ(parse_occupancy("0"), kEmpty);
    EXPECT_EQ(parse_occupancy("H"), kH);
    EXPECT_EQ(parse_occupancy("V2"), (PolarizationOccupancy{0, 2}));
    EXPECT_EQ(parse_occupancy("HV"), (PolarizationOccupancy{1, 1}));
    EXPECT_EQ(parse_occupancy("H2V"), (PolarizationOccupancy{2, 1}));
    EXPECT_THROW(parse_occupancy("X"), Error);
}

TEST(Creation, OnVacuumGivesSinglePhoton) {
    const PureState s = creation_apply(PureState::vacuum(1), 0, Rail::H);
    EXPECT_EQ(s.terms().size(), 1U);
    EXPECT_NEAR(std::abs(s.amplitude(ket({"H"})) - 1.0), 0.0, kTol);
}

TEST(Creation, BosonicFactor) {
    const PureState s = creation_apply(states::product("H"), 0, Rail::H);
    EXPECT_NEAR(std::abs(s.amplitude(ket({"H2"})) - std::sqrt(2.0)), 0.0, kTol);
}

TEST(Creation, DistinctRailsCommute) {
    const PureState s = creation_apply(states::product("H"), 0, Rail::V);
    EXPECT_NEAR(std::abs(s.amplitude(ket({"HV"})) - 1.0), 0.0, kTol);
}

TEST(Creation, LadderFactorUpToCap) {
    PureState s = PureState::vacuum(1);
    for (int n = 1; n <= kDefaultPhotonCap; ++n) {
        const PureState next = creation_apply(s, 0, Rail::V);
        const FockBasisVector to{{0, n}};
        const FockBasisVector from{{0, n - 1}};
        EXPECT_NEAR(std::abs(next.amplitude(to) / s.amplitude(from) - std::sqrt(static_cast<double>(n))), 0.0, kTol);
        s = next;
    }
    EXPECT_THROW(creation_apply(s, 0, Rail::H), CapacityError);
}

TEST(Tensor, ProductOfSinglePhotons) {
    const PureState s = tensor(states::product("H"), states::product("V"));
    EXPECT_EQ(s.modes(), 2U);
    EXPECT_NEAR(std::abs(s.amplitude(ket({"H", "V"})) - 1.0), 0.0, kTol);
}

TEST(Tensor, TwoBellPairsHaveFourEqualTerms) {
    const PureState s = tensor(states::phi_plus(), states::phi_plus());
    ASSERT_EQ(s.terms().size(), 4U);
    for (const auto& [v, a] : s.terms()) EXPECT_NEAR(std::abs(a - 0.5), 0.0, kTol);
}

TEST(Tensor, VacuumAddsEmptyMode) {
    const PureState psi = states::phi_plus();
    const PureState s = tensor(PureState::vacuum(1), psi);
    ASSERT_EQ(s.modes(), 3U);
    for (const auto& [v, a] : psi.terms()) {
        FockBasisVector w = v;
        w.modes.insert(w.modes.begin(), kEmpty);
        EXPECT_EQ(s.amplitude(w), a);
    }
}

TEST(Tensor, NormIsMultiplicative) {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 200; ++i) {
        const PureState a = testing::random_state(rng, 2).scaled(1.7);
        const PureState b = testing::random_state(rng, 3).scaled(0.4);
        EXPECT_NEAR(tensor(a, b).norm_squared(), a.norm_squared() * b.norm_squared(), kTol);
    }
}

TEST(Reorder, IdentityKeepsState) {
    const PureState s = states::ghz();
    const std::array<std::size_t, 3> id{0, 1, 2};
    EXPECT_EQ(reorder_modes(s, id).terms(), s.terms());
}

TEST(Reorder, SwapTwoModes) {
    const std::array<std::size_t, 2> swap{1, 0};
    const PureState s = reorder_modes(states::product("HV"), swap);
    EXPECT_NEAR(std::abs(s.amplitude(ket({"V", "H"})) - 1.0), 0.0, kTol);
}

TEST(Reorder, BellPairsAfterPbsWithThirdModeLast) {
    const PureState after = apply_pbs(tensor(states::phi_plus(), states::phi_plus()), 1, 2);
    const std::array<std::size_t, 4> perm{0, 1, 3, 2};
    const PureState s = reorder_modes(after, perm);
    ASSERT_EQ(s.terms().size(), 4U);
    for (const auto& k : {ket({"H", "H", "H", "H"}), ket({"H", "HV", "V", "0"}), ket({"V", "0", "H", "HV"}),
                          ket({"V", "V", "V", "V"})}) {
        EXPECT_NEAR(std::abs(s.amplitude(k) - 0.5), 0.0, kTol) << k.to_string();
    }
}

TEST(Reorder, InverseRestoresExactly) {
    std::mt19937_64 rng(12);
    std::vector<std::size_t> p(4);
    std::iota(p.begin(), p.end(), 0);
    for (int i = 0; i < 100; ++i) {
        std::shuffle(p.begin(), p.end(), rng);
        std::vector<std::size_t> inv(p.size());
        for (std::size_t k = 0; k < p.size(); ++k) inv[p[k]] = k;
        const PureState s = testing::random_state(rng, 4);
        EXPECT_EQ(reorder_modes(reorder_modes(s, p), inv).terms(), s.terms());
    }
}

TEST(Reorder, RejectsNonPermutation) {
    const std::array<std::size_t, 2> bad{0, 0};
    EXPECT_THROW(reorder_modes(states::product("HV"), bad), DimensionError);
}

TEST(TraceOut, EmptyLastMode) {
    const Ensemble e = trace_out(Ensemble::pure(states::product("H0")), 1);
    ASSERT_EQ(e.size(), 1U);
    EXPECT_NEAR(e.branches()[0].weight, 1.0, kTol);
    EXPECT_TRUE(equal_up_to_global_phase(e.branches()[0].state, states::product("H")));
}

TEST(TraceOut, BellMarginalIsEqualMixture) {
    const Ensemble e = trace_out(Ensemble::pure(states::phi_plus()), 1);
    ASSERT_EQ(e.size(), 2U);
    double h = 0.0;
    double v = 0.0;
    for (const auto& b : e.branches()) {
        if (equal_up_to_global_phase(b.state, states::product("H"))) h += b.weight;
        if (equal_up_to_global_phase(b.state, states::product("V"))) v += b.weight;
    }
    EXPECT_NEAR(h, 0.5, kTol);
    EXPECT_NEAR(v, 0.5, kTol);
}

TEST(TraceOut, EmptyMiddleModeOfV0H) {
    const Ensemble e = trace_out(Ensemble::pure(states::v0h()), 1);
    ASSERT_EQ(e.size(), 1U);
    EXPECT_NEAR(e.branches()[0].weight, 1.0, kTol);
    EXPECT_TRUE(equal_up_to_global_phase(e.branches()[0].state, states::product("VH")));
}

TEST(TraceOut, PreservesTotalWeight) {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 200; ++i) {
        const Ensemble e = Ensemble::pure(testing::random_state(rng, 3));
        EXPECT_NEAR(trace_out(e, i % 3).total_weight(), 1.0, kTol);
    }
}

TEST(InnerProduct, Examples) {
    EXPECT_NEAR(std::abs(inner_product(states::product("H"), states::product("H")) - 1.0), 0.0, kTol);
    EXPECT_NEAR(std::abs(inner_product(states::ghz(+1), states::ghz(-1))), 0.0, kTol);
    EXPECT_NEAR(std::abs(inner_product(states::t1_prime(), states::t1_prime()) - 1.0), 0.0, kTol);
}

TEST(GlobalPhase, Examples) {
    const PureState psi = states::t1_prime();
    EXPECT_TRUE(equal_up_to_global_phase(psi, std::polar(1.0, std::numbers::pi / 4) * psi));
    EXPECT_FALSE(equal_up_to_global_phase(states::ghz(+1), states::ghz(-1)));
}

TEST(NamedStates, Definitions) {
    const PureState phi = states::phi_plus();
    EXPECT_NEAR(std::abs(phi.amplitude(ket({"H", "H"})) - kInvSqrt2), 0.0, kTol);
    EXPECT_NEAR(std::abs(phi.amplitude(ket({"V", "V"})) - kInvSqrt2), 0.0, kTol);
    EXPECT_TRUE(equal_up_to_global_phase(states::phi_d(3), states::ghz()));
    EXPECT_TRUE(equal_up_to_global_phase(states::phi_d(2), phi));
    const PureState t1 = states::t1_prime();
    EXPECT_NEAR(std::real(t1.amplitude(ket({"H", "V", "H", "V"}))), -0.5, kTol);
    EXPECT_NEAR(std::real(t1.amplitude(ket({"V", "H", "H", "V"}))), 0.5, kTol);
}

TEST(PureState, AddRejectsWrongShapeAndCap) {
    PureState s(2, 2);
    EXPECT_THROW(s.add(ket({"H"}), 1.0), DimensionError);
    EXPECT_THROW(s.add(ket({"H2V", "0"}), 1.0), CapacityError);
}

TEST(PureState, PrunesTinyAmplitudes) {
    PureState s(1);
    s.add(ket({"H"}), 1.0);
    s.add(ket({"V"}), 1e-16);
    EXPECT_EQ(s.terms().size(), 1U);
}

TEST(Json, RoundTrip) {
    std::mt19937_64 rng(14);
    for (int i = 0; i < 50; ++i) {
        const PureState s = testing::random_state(rng, 3);
        const PureState back = state_from_json(to_json(s));
        EXPECT_EQ(back.terms(), s.terms());
        EXPECT_EQ(to_json(back).dump(), to_json(s).dump());
    }
}

TEST(Records, LabelJoinsEvents) {
    OutcomeRecord r;
    r.events.push_back({"b2g", {true, false}, "H^n0", Disposition::Keep});
    r.events.push_back({"ecc", {true, true, false, false}, "5", Disposition::Keep});
    EXPECT_EQ(r.label(), "b2g=H^n0;ecc=5");
    EXPECT_FALSE(r.discarded());
    r.events.back().disposition = Disposition::Discard;
    EXPECT_TRUE(r.discarded());
}

}  // namespace
}  // namespace polarsim
