// Copyright 2026 The polarsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "polarsim/detection.hpp"

#include <algorithm>
#include <array>
#include <numbers>

#include "polarsim/errors.hpp"

namespace polarsim {

std::string pattern_string(const ClickPattern& p) {
    std::string s;
    for (bool b : p) s += b ? '1' : '0';
    return s;
}

std::string interpret_pattern(const ClickPattern& pattern, SiteKind kind) {
    const auto clicks = std::ranges::count(pattern, true);
    switch (kind) {
        case SiteKind::Plain:
            return pattern_string(pattern);
        case SiteKind::Pid:
            if (pattern.size() != 2) throw DimensionError("PID patterns have two rails");
            if (pattern[0] && pattern[1]) return kPidBoth;
            if (pattern[0]) return kPidH;
            if (pattern[1]) return kPidV;
            return kPidSilent;
        case SiteKind::FourRail: {
            if (pattern.size() != 4) throw DimensionError("four-rail patterns have four rails");
            if (clicks == 0) return kFourSilent;
            if (clicks == 1) return kOneClick;
            if (clicks > 2) {
                throw ConsistencyError("pattern " + pattern_string(pattern) +
                                       " needs three photons at a two-photon site");
            }
            static const std::map<std::string, std::string> shorthand{
                {"0101", "1"}, {"1010", "2"}, {"1001", "3"}, {"0110", "4"}, {"1100", "5"}, {"0011", "6"}};
            return shorthand.at(pattern_string(pattern));
        }
    }
    return pattern_string(pattern);
}

const FeedForwardAction& FeedForwardRule::at(const std::string& label) const {
    auto it = actions_.find(label);
    if (it == actions_.end()) throw UnmatchedPatternError("no feed-forward rule for outcome '" + label + "'");
    return it->second;
}

Ensemble measure_nr(const PureState& state, std::span<const std::size_t> modes, const std::string& site,
                    SiteKind kind) {
    for (std::size_t m : modes) {
        if (m >= state.modes()) throw DimensionError("measured mode " + std::to_string(m) + " out of range");
    }
    std::vector<bool> measured(state.modes(), false);
    for (std::size_t m : modes) {
        if (measured[m]) throw DimensionError("mode " + std::to_string(m) + " measured twice");
        measured[m] = true;
    }

    // Group by the full occupancy of the measured modes.
    std::map<std::vector<PolarizationOccupancy>, PureState> parts;
    for (const auto& [v, a] : state.terms()) {
        std::vector<PolarizationOccupancy> key;
        key.reserve(modes.size());
        for (std::size_t m : modes) key.push_back(v.modes[m]);
        FockBasisVector rest;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!measured[i]) rest.modes.push_back(v.modes[i]);
        }
        auto [it, _] = parts.try_emplace(std::move(key), state.modes() - modes.size(), state.photon_cap());
        it->second.add(rest, a);
    }

    // Weights are squared norms of the projections, so they sum to <ψ|ψ>.
    Ensemble out;
    for (auto& [key, part] : parts) {
        const double p = part.norm_squared();
        if (part.empty() || p == 0.0) continue;
        ClickPattern pattern;
        for (const auto& o : key) pattern.push_back(o.total() > 0);
        OutcomeEvent ev{site, pattern, interpret_pattern(pattern, kind), Disposition::Keep};
        out.add(Branch{p, part.normalized(), OutcomeRecord{{ev}}});
    }
    return out;
}

Ensemble measure_nr(const Ensemble& ensemble, std::span<const std::size_t> modes, const std::string& site,
                    SiteKind kind) {
    Ensemble out;
    for (const auto& br : ensemble.branches()) {
        if (br.discarded()) {
            out.add(br);
            continue;
        }
        const Ensemble measured = measure_nr(br.state, modes, site, kind);
        for (const auto& sub : measured.branches()) {
            Branch b{br.weight * sub.weight, sub.state, br.record};
            b.record.events.push_back(sub.record.events.front());
            out.add(std::move(b));
        }
    }
    return out;
}

Ensemble apply_feed_forward(const Ensemble& ensemble, const FeedForwardRule& rule) {
    Ensemble out;
    for (const auto& br : ensemble.branches()) {
        if (br.discarded() || br.record.events.empty()) {
            out.add(br);
            continue;
        }
        Branch b = br;
        auto& last = b.record.events.back();
        const auto& action = rule.at(last.label);
        last.disposition = action.disposition;
        b.state = apply_circuit(std::move(b.state), action.elements);
        out.add(std::move(b));
    }
    return out;
}

PureState pid_split(const PureState& state, std::size_t mode) {
    if (mode >= state.modes()) throw DimensionError("PID mode out of range");
    const std::size_t fresh = state.modes();
    PureState s = apply_pr(state.with_extra_modes(1), mode, std::numbers::pi / 4);
    return apply_pbs(s, mode, fresh);
}

Ensemble pid(const PureState& state, std::size_t mode, const FeedForwardRule& rule, const std::string& site) {
    PureState split = pid_split(state, mode);
    const std::array rails{mode, split.modes() - 1};
    return apply_feed_forward(measure_nr(split, rails, site, SiteKind::Pid), rule);
}

PureState pid_pair_split(const PureState& state, std::size_t p, std::size_t q) {
    if (p == q) throw DimensionError("PID pair needs two distinct modes");
    return pid_split(pid_split(state, p), q);
}

Ensemble measure_pid_pair(const PureState& state, std::size_t p, std::size_t q, const std::string& site) {
    const std::size_t m = state.modes();
    PureState split = pid_pair_split(state, p, q);
    const std::array rails{p, q, m, m + 1};
    return measure_nr(split, rails, site, SiteKind::FourRail);
}

FeedForwardRule phi_plus_restore_rule(std::size_t fix_mode) {
    return {
        {kPidH, {{ElementDescriptor::pdps(fix_mode, std::numbers::pi)}, Disposition::Keep}},
        {kPidV, {{}, Disposition::Keep}},
    };
}

}  // namespace polarsim
