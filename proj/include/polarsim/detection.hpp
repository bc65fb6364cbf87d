// Copyright 2026 The polarsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "polarsim/elements.hpp"
#include "polarsim/fock.hpp"

namespace polarsim {

/// One boolean per detector: true iff at least one photon arrived.
using ClickPattern = std::vector<bool>;

std::string pattern_string(const ClickPattern& p);

/// How a measurement site names its click patterns.
enum class SiteKind {
    Plain,     // label is the raw bit string, e.g. "10"
    Pid,       // two rails (H-rail, V-rail): "H^n0", "0V^n", "00", "H^nV^n"
    FourRail,  // two PIDs, rails (pH, qH, pV, qV): shorthand "1".."6", "one-click", "0000"
};

inline const std::string kPidH = "H^n0";
inline const std::string kPidV = "0V^n";
inline const std::string kPidSilent = "00";
inline const std::string kPidBoth = "H^nV^n";
inline const std::string kOneClick = "one-click";
inline const std::string kFourSilent = "0000";

/// Maps a click pattern to its outcome label. Two-click patterns at four-rail
/// sites use the shorthand 1 = |0H0V>, 2 = |H0V0>, 3 = |H00V>, 4 = |0HV0>,
/// 5 = |HH00>, 6 = |00VV>. Three or more clicks at a four-rail site is a
/// ConsistencyError (the gadgets never route more than two photons there).
std::string interpret_pattern(const ClickPattern& pattern, SiteKind kind);

struct FeedForwardAction {
    std::vector<ElementDescriptor> elements;
    Disposition disposition = Disposition::Keep;
};

/// Classical post-processing: outcome label -> corrections and keep/discard.
class FeedForwardRule {
public:
    FeedForwardRule() = default;
    FeedForwardRule(std::initializer_list<std::pair<const std::string, FeedForwardAction>> init)
        : actions_(init) {}

    void set(const std::string& label, FeedForwardAction action) { actions_[label] = std::move(action); }
    [[nodiscard]] bool contains(const std::string& label) const { return actions_.contains(label); }
    /// Throws UnmatchedPatternError for labels without a rule.
    [[nodiscard]] const FeedForwardAction& at(const std::string& label) const;
    [[nodiscard]] const std::map<std::string, FeedForwardAction>& actions() const { return actions_; }

private:
    std::map<std::string, FeedForwardAction> actions_;
};

/// Non-number-resolving measurement of `modes`. One branch per photon-number
/// configuration of the measured modes (different photon numbers that give the
/// same clicks stay separate branches sharing one label). Measured modes are
/// removed; each branch state is renormalized. Zero-probability outcomes are
/// omitted.
Ensemble measure_nr(const PureState& state, std::span<const std::size_t> modes, const std::string& site,
                    SiteKind kind = SiteKind::Plain);

/// Applies measure_nr to every kept branch; discarded branches pass through.
Ensemble measure_nr(const Ensemble& ensemble, std::span<const std::size_t> modes, const std::string& site,
                    SiteKind kind = SiteKind::Plain);

/// Applies `rule` to every kept branch using the label of its last event.
/// Element targets index the branch's remaining modes.
Ensemble apply_feed_forward(const Ensemble& ensemble, const FeedForwardRule& rule);

/// PR(π/4) on `mode`, then a PBS onto a fresh mode appended at the end. Returns
/// the state with one extra mode; the H-rail stays in `mode`, the V-rail lands in
/// the new last mode.
PureState pid_split(const PureState& state, std::size_t mode);

/// Polarization-independent detector on `mode` followed by `rule`.
Ensemble pid(const PureState& state, std::size_t mode, const FeedForwardRule& rule,
             const std::string& site = "pid");

/// Splits modes p and q with two PIDs; detector rails are appended as two new
/// modes, ordered (pH, qH, pV, qV) = (p, q, M, M+1).
PureState pid_pair_split(const PureState& state, std::size_t p, std::size_t q);

/// pid_pair_split then measurement of the four rails as a FourRail site.
Ensemble measure_pid_pair(const PureState& state, std::size_t p, std::size_t q, const std::string& site);

/// The two-outcome rule that restores |Φ+_{d-1}> after a PID on |Φ+_d>:
/// PDPS(π) on remaining mode `fix_mode` for H^n0, nothing for 0V^n.
FeedForwardRule phi_plus_restore_rule(std::size_t fix_mode = 0);

}  // namespace polarsim
