// Copyright 2026 The polarsim Authors
// SPDX-License-Identifier: Apache-2.0

#include <array>
#include <cmath>
#include <map>
#include <numbers>

#include <gtest/gtest.h>

#include "polarsim/detection.hpp"
#include "polarsim/errors.hpp"
#include "polarsim/named_states.hpp"
#include "support.hpp"

namespace polarsim {
namespace {

using testing::kTol;
const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

std::map<std::string, double> weight_by_label(const Ensemble& e) {
    std::map<std::string, double> out;
    for (const auto& b : e.branches()) out[b.record.events.back().label] += b.weight;
    return out;
}

FeedForwardRule accept_all() {
    FeedForwardRule any;
    for (const auto& l : {kPidH, kPidV, kPidSilent, kPidBoth}) any.set(l, {});
    return any;
}

// Bell pairs through the inner PBS with the third mode moved last, then the PID split on it.
PureState bell_pairs_before_detectors() {
    PureState s = apply_pbs(tensor(states::phi_plus(), states::phi_plus()), 1, 2);
    const std::array<std::size_t, 4> perm{0, 1, 3, 2};
    return pid_split(reorder_modes(s, perm), 3);
}

TEST(Interpret, PidLabels) {
    EXPECT_EQ(interpret_pattern({true, false}, SiteKind::Pid), kPidH);
    EXPECT_EQ(interpret_pattern({false, true}, SiteKind::Pid), kPidV);
    EXPECT_EQ(interpret_pattern({false, false}, SiteKind::Pid), kPidSilent);
    EXPECT_EQ(interpret_pattern({true, true}, SiteKind::Pid), kPidBoth);
    EXPECT_EQ(interpret_pattern({true, false, true}, SiteKind::Plain), "101");
}

TEST(Interpret, FourRailShorthand) {
    EXPECT_EQ(interpret_pattern({false, true, false, true}, SiteKind::FourRail), "1");
    EXPECT_EQ(interpret_pattern({true, false, true, false}, SiteKind::FourRail), "2");
    EXPECT_EQ(interpret_pattern({true, false, false, true}, SiteKind::FourRail), "3");
    EXPECT_EQ(interpret_pattern({false, true, true, false}, SiteKind::FourRail), "4");
    EXPECT_EQ(interpret_pattern({true, true, false, false}, SiteKind::FourRail), "5");
    EXPECT_EQ(interpret_pattern({false, false, true, true}, SiteKind::FourRail), "6");
    EXPECT_EQ(interpret_pattern({false, false, false, false}, SiteKind::FourRail), kFourSilent);
    EXPECT_EQ(interpret_pattern({true, false, false, false}, SiteKind::FourRail), kOneClick);
    EXPECT_EQ(interpret_pattern({false, false, false, true}, SiteKind::FourRail), kOneClick);
    EXPECT_THROW(interpret_pattern({true, true, true, false}, SiteKind::FourRail), ConsistencyError);
    EXPECT_THROW(interpret_pattern({true, true}, SiteKind::FourRail), DimensionError);
}

TEST(MeasureNr, SinglePhotonClicks) {
    const std::array<std::size_t, 1> modes{0};
    const Ensemble e = measure_nr(states::product("H"), modes, "d");
    ASSERT_EQ(e.size(), 1U);
    const Branch& b = e.branches()[0];
    EXPECT_NEAR(b.weight, 1.0, kTol);
    EXPECT_EQ(b.record.events[0].pattern, ClickPattern{true});
    EXPECT_EQ(b.record.events[0].label, "1");
    EXPECT_EQ(b.state.modes(), 0U);
}

TEST(MeasureNr, BellPairDetectorProbabilities) {
    const PureState s = bell_pairs_before_detectors();
    const std::array<std::size_t, 2> rails{3, 4};
    const auto w = weight_by_label(measure_nr(s, rails, "pid", SiteKind::Pid));
    EXPECT_NEAR(w.at(kPidSilent), 0.25, kTol);
    EXPECT_NEAR(w.at(kPidH), 0.375, kTol);
    EXPECT_NEAR(w.at(kPidV), 0.375, kTol);
    EXPECT_FALSE(w.contains(kPidBoth));
}

TEST(MeasureNr, KeepsPhotonNumbersApart) {
    // (|H> + |H2>)/√2 on one detector: both click, but stay separate branches.
    PureState s(2);
    s.add({kH, kH}, kInvSqrt2);
    s.add({{2, 0}, kH}, kInvSqrt2);
    const std::array<std::size_t, 1> modes{0};
    const Ensemble e = measure_nr(s, modes, "d");
    ASSERT_EQ(e.size(), 2U);
    for (const auto& b : e.branches()) {
        EXPECT_EQ(b.record.events[0].label, "1");
        EXPECT_NEAR(b.weight, 0.5, kTol);
    }
}

TEST(MeasureNr, WeightsSumToNorm) {
    std::mt19937_64 rng(31);
    for (int i = 0; i < 300; ++i) {
        const PureState s = testing::random_state(rng, 4, 2, 6).scaled(0.8);
        const std::array<std::size_t, 2> modes{static_cast<std::size_t>(i % 4), static_cast<std::size_t>((i + 1) % 4)};
        EXPECT_NEAR(measure_nr(s, modes, "d").total_weight(), s.norm_squared(), kTol);
    }
}

TEST(MeasureNr, RejectsBadModes) {
    const std::array<std::size_t, 2> dup{0, 0};
    EXPECT_THROW(measure_nr(states::product("HV"), dup, "d"), DimensionError);
    const std::array<std::size_t, 1> out_of_range{3};
    EXPECT_THROW(measure_nr(states::product("HV"), out_of_range, "d"), DimensionError);
}

TEST(Pid, HorizontalInput) {
    const PureState split = pid_split(states::product("H"), 0);
    EXPECT_NEAR(std::real(split.amplitude({kH, kEmpty})), kInvSqrt2, kTol);
    EXPECT_NEAR(std::real(split.amplitude({kEmpty, kV})), kInvSqrt2, kTol);
    const auto w = weight_by_label(pid(states::product("H"), 0, accept_all()));
    EXPECT_NEAR(w.at(kPidH), 0.5, kTol);
    EXPECT_NEAR(w.at(kPidV), 0.5, kTol);
}

TEST(Pid, VerticalInputFlipsSignOnHorizontalRail) {
    const PureState split = pid_split(states::product("V"), 0);
    EXPECT_NEAR(std::real(split.amplitude({kH, kEmpty})), -kInvSqrt2, kTol);
    EXPECT_NEAR(std::real(split.amplitude({kEmpty, kV})), kInvSqrt2, kTol);
    const auto w = weight_by_label(pid(states::product("V"), 0, accept_all()));
    EXPECT_NEAR(w.at(kPidH), 0.5, kTol);
    EXPECT_NEAR(w.at(kPidV), 0.5, kTol);
}

TEST(Pid, BlindToPolarization) {
    // H, V and the circular states split evenly over the two detectors. Any
    // single photon makes exactly one detector click, whatever its polarization.
    const Complex i(0.0, 1.0);
    for (const auto& s : {states::product("H"), states::product("V"), states::qubit(1.0, i), states::qubit(1.0, -i)}) {
        const auto w = weight_by_label(pid(s, 0, accept_all()));
        ASSERT_EQ(w.size(), 2U);
        EXPECT_NEAR(w.at(kPidH), 0.5, kTol);
        EXPECT_NEAR(w.at(kPidV), 0.5, kTol);
    }
    std::mt19937_64 rng(32);
    for (int k = 0; k < 200; ++k) {
        const auto w = weight_by_label(pid(testing::random_qubits(rng, 1), 0, accept_all()));
        EXPECT_FALSE(w.contains(kPidSilent));
        EXPECT_FALSE(w.contains(kPidBoth));
        double clicks = 0.0;
        for (const auto& [label, p] : w) clicks += p;
        EXPECT_NEAR(clicks, 1.0, kTol);
    }
}

TEST(Pid, NumberResolutionIsLost) {
    // A lone H photon and a pair of H photons light the same detector and get the same label.
    const FeedForwardRule any = accept_all();
    const auto one = weight_by_label(pid(states::product("H"), 0, any));
    const auto two = weight_by_label(pid(PureState::basis({{2, 0}}), 0, any));
    EXPECT_TRUE(one.contains(kPidH) && two.contains(kPidH));
    EXPECT_TRUE(one.contains(kPidV) && two.contains(kPidV));
    const std::array<std::size_t, 1> mode{0};
    EXPECT_EQ(measure_nr(states::product("H"), mode, "d").branches()[0].record.events[0].pattern,
              measure_nr(PureState::basis({{2, 0}}), mode, "d").branches()[0].record.events[0].pattern);
}

TEST(Pid, ChainRestoresShorterBellState) {
    for (int d = 2; d <= 5; ++d) {
        const Ensemble e = pid(states::phi_d(d), static_cast<std::size_t>(d - 1), phi_plus_restore_rule());
        EXPECT_NEAR(e.keep_weight(), 1.0, kTol) << "d=" << d;
        for (const auto& b : e.branches()) {
            EXPECT_TRUE(equal_up_to_global_phase(b.state, states::phi_d(d - 1))) << "d=" << d;
        }
    }
}

TEST(FeedForward, UnmatchedLabelThrows) {
    const FeedForwardRule only_h{{kPidH, {}}};
    EXPECT_THROW((void)only_h.at(kPidV), UnmatchedPatternError);
    EXPECT_THROW(pid(states::product("V"), 0, only_h), UnmatchedPatternError);
}

TEST(FeedForward, DiscardedBranchesAreNotTouchedAgain) {
    const FeedForwardRule drop_v{{kPidH, {}}, {kPidV, {{}, Disposition::Discard}}};
    const Ensemble first = pid(states::product("HH"), 1, drop_v, "first");
    ASSERT_EQ(first.size(), 2U);
    const std::array<std::size_t, 1> mode{0};
    const Ensemble second = measure_nr(first, mode, "second");
    for (const auto& b : second.branches()) {
        if (b.discarded()) {
            EXPECT_EQ(b.record.events.size(), 1U);
            EXPECT_EQ(b.state.modes(), 1U);
        } else {
            EXPECT_EQ(b.record.events.size(), 2U);
        }
    }
    EXPECT_NEAR(second.total_weight(), 1.0, kTol);
}

TEST(PidPair, RailOrder) {
    // Photon in p with V polarization ends on the pV rail (third) or the pH rail (first).
    const std::array<std::size_t, 4> rails{0, 1, 2, 3};
    const Ensemble e = measure_nr(pid_pair_split(states::product("H0"), 0, 1), rails, "pair", SiteKind::FourRail);
    std::map<std::string, double> patterns;
    for (const auto& b : e.branches()) patterns[pattern_string(b.record.events[0].pattern)] += b.weight;
    EXPECT_NEAR(patterns.at("1000"), 0.5, kTol);
    EXPECT_NEAR(patterns.at("0010"), 0.5, kTol);
    EXPECT_EQ(measure_pid_pair(states::product("HV"), 0, 1, "pair").size(), 4U);
}

}  // namespace
}  // namespace polarsim
