// Copyright 2026 The polarsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "polarsim/gadgets.hpp"

#include <array>
#include <numbers>

#include "polarsim/errors.hpp"
#include "polarsim/named_states.hpp"

namespace polarsim {

namespace {

constexpr double kPi = std::numbers::pi;

using E = ElementDescriptor;

FeedForwardAction keep(std::vector<ElementDescriptor> elements = {}) {
    return {std::move(elements), Disposition::Keep};
}

FeedForwardAction discard() { return {{}, Disposition::Discard}; }

void require_modes(const PureState& s, std::size_t n, const char* what) {
    if (s.modes() != n) {
        throw DimensionError(std::string(what) + " expects " + std::to_string(n) + " modes, got " +
                             std::to_string(s.modes()));
    }
}

std::vector<ElementDescriptor> concat(std::vector<ElementDescriptor> a, const std::vector<ElementDescriptor>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

}  // namespace

FeedForwardRule b2g_rule() {
    return {
        {kPidH, keep({E::pdps(0, kPi)})},
        {kPidV, keep()},
        {kPidSilent, discard()},
        {kPidBoth, discard()},
    };
}

FeedForwardRule g2a_rule() {
    const std::vector<ElementDescriptor> to_t1 = {
        E::pr(1, kPi / 2), E::pr(2, kPi / 2), E::pdps(1, kPi / 2), E::pdps(2, -kPi / 2),
    };
    const auto from_56 = concat({E::pdps(1, kPi), E::pdps(2, kPi)}, to_t1);
    const auto from_34 = concat({E::ps(0, kPi / 2)}, to_t1);
    return {
        {"5", keep(from_56)}, {"6", keep(from_56)},
        {"3", keep(from_34)}, {"4", keep(from_34)},
        {"1", discard()},     {"2", discard()},
        {kOneClick, discard()}, {kFourSilent, discard()},
    };
}

FeedForwardRule a2c_rule() {
    FeedForwardRule r;
    for (const char* l : {"1", "2", "3", "4", "5", "6"}) r.set(l, keep());
    r.set(kOneClick, discard());
    r.set(kFourSilent, discard());
    return r;
}

FeedForwardRule cz_rule() {
    // Modes are the two remaining computational modes, 0 = "mode 1", 1 = "mode 2".
    // A standalone "π PS" is a π phase on the vertical rail of both modes; a
    // trailing "PS of π" is a global phase.
    const E flip1 = E::pr(0, kPi / 2);
    const E flip2 = E::pr(1, kPi / 2);
    const E z2 = E::pdps(1, kPi);
    const std::vector<E> zz = {E::pdps(0, kPi), E::pdps(1, kPi)};
    const E global = E::ps(0, kPi);

    const std::vector<E> both = {flip1, flip2, z2};
    const auto second = concat(concat({flip2}, zz), {z2});
    const std::vector<E> phase_only = {z2};
    const auto first = concat(concat({flip1}, zz), {z2});

    FeedForwardRule r;
    auto put = [&r](std::initializer_list<const char*> labels, const std::vector<E>& ops) {
        for (const char* l : labels) r.set(l, keep(ops));
    };
    put({"11", "22"}, both);
    put({"12", "21"}, concat(both, {global}));
    put({"31", "42"}, second);
    put({"41", "32"}, concat(second, {global}));
    put({"34", "43"}, phase_only);
    put({"33", "44"}, concat(phase_only, {global}));
    put({"14", "23"}, first);
    put({"13", "24"}, concat(first, {global}));
    return r;
}

GadgetResult b2g(const PureState& input, const std::string& site) {
    require_modes(input, 4, "b2g");
    PureState s = apply_pbs(input, 1, 2);
    const std::array<std::size_t, 4> third_last{0, 1, 3, 2};
    s = reorder_modes(s, third_last);
    return {pid(s, 3, b2g_rule(), site), "PID pattern is H^n0 or 0V^n"};
}

PureState ecc_pre_detection(const PureState& state, std::size_t mode_a, std::size_t mode_b) {
    PureState s = apply_pr(state, mode_a, kPi / 4);
    s = apply_pr(s, mode_b, kPi / 4);
    s = apply_pbs(s, mode_a, mode_b);
    s = apply_pdps(s, mode_a, kPi / 4);
    s = apply_pdps(s, mode_b, kPi / 4);
    return pid_pair_split(s, mode_a, mode_b);
}

Ensemble ecc(const PureState& state, std::size_t mode_a, std::size_t mode_b, const std::string& site) {
    const std::size_t m = state.modes();
    PureState pre = ecc_pre_detection(state, mode_a, mode_b);
    const std::array rails{mode_a, mode_b, m, m + 1};
    FeedForwardRule heralds;
    for (const char* l : {"3", "4", "5", "6"}) heralds.set(l, keep());
    for (const auto& l : {std::string("1"), std::string("2"), kOneClick, kFourSilent}) heralds.set(l, discard());
    return apply_feed_forward(measure_nr(pre, rails, site, SiteKind::FourRail), heralds);
}

GadgetResult g2a(const Ensemble& input, const std::string& site) {
    const FeedForwardRule rule = g2a_rule();
    Ensemble out = expand_kept(input, [&](const PureState& s) {
        require_modes(s, 6, "g2a");
        Ensemble measured = measure_nr(ecc_pre_detection(s, 1, 4), std::array<std::size_t, 4>{1, 4, 6, 7}, site,
                                       SiteKind::FourRail);
        return apply_feed_forward(measured, rule);
    });
    return {std::move(out), "ECC label in {3,4,5,6}"};
}

GadgetResult g2a(const PureState& input, const std::string& site) { return g2a(Ensemble::pure(input), site); }

PureState a2c_pre_detection(const PureState& state, std::size_t mode_x, std::size_t mode_y) {
    return pid_pair_split(apply_bs(state, mode_x, mode_y), mode_x, mode_y);
}

Ensemble a2c(const PureState& state, std::size_t mode_x, std::size_t mode_y, const std::string& site) {
    const std::size_t m = state.modes();
    PureState pre = a2c_pre_detection(state, mode_x, mode_y);
    const std::array rails{mode_x, mode_y, m, m + 1};
    return apply_feed_forward(measure_nr(pre, rails, site, SiteKind::FourRail), a2c_rule());
}

GadgetResult cz_gate(const PureState& input, const Ensemble& ancilla) {
    require_modes(input, 2, "cz_gate input");
    const FeedForwardRule rule = cz_rule();
    Ensemble out = expand_kept(ancilla, [&](const PureState& anc) {
        require_modes(anc, 4, "cz_gate ancilla");
        // (in0, in1, a0..a3) -> (in0, a0, a1, a2, a3, in1)
        const std::array<std::size_t, 6> layout{0, 2, 3, 4, 5, 1};
        PureState full = reorder_modes(tensor(input, anc), layout);
        Ensemble top = a2c(full, 0, 1, kA2cSiteTop);
        // Remaining (a1, a2, a3, in1): the bottom site pairs in1 with a3.
        Ensemble both = expand_kept(top, [](const PureState& s) { return a2c(s, 3, 2, kA2cSiteBottom); });
        Ensemble fixed;
        for (const auto& br : both.branches()) {
            if (br.discarded()) {
                fixed.add(br);
                continue;
            }
            const auto n = br.record.events.size();
            const std::string key = br.record.events[n - 2].label + br.record.events[n - 1].label;
            const auto& action = rule.at(key);
            Branch b = br;
            b.record.events.back().disposition = action.disposition;
            b.state = apply_circuit(b.state, action.elements);
            fixed.add(std::move(b));
        }
        return fixed;
    });
    return {std::move(out), "both A2C sites show exactly two clicks"};
}

GadgetResult cz_gate(const PureState& input, const PureState& ancilla) {
    return cz_gate(input, Ensemble::pure(ancilla));
}

GadgetResult cz_gate(const PureState& input) { return cz_gate(input, states::t1_prime()); }

PipelineResult cz_full_pipeline(const PureState& input) {
    const PureState pairs = tensor(states::phi_plus(), states::phi_plus());
    return cz_full_pipeline(input, pairs, pairs);
}

PipelineResult cz_full_pipeline(const PureState& input, const PureState& register_a, const PureState& register_b) {
    GadgetResult a = b2g(register_a, "b2g[a]");
    GadgetResult b = b2g(register_b, "b2g[b]");
    GadgetResult ancilla = g2a(tensor(a.ensemble, b.ensemble));
    GadgetResult gate = cz_gate(input, ancilla.ensemble);
    return {std::move(ancilla), std::move(gate)};
}

}  // namespace polarsim
