// Copyright 2026 The polarsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "polarsim/detection.hpp"
#include "polarsim/fock.hpp"

namespace polarsim {

/// Ensemble plus the rule that decides which branches count as success.
struct GadgetResult {
    Ensemble ensemble;
    std::string success_predicate;

    /// Sum of kept branch weights, recomputed on every call.
    [[nodiscard]] double success_probability() const { return ensemble.keep_weight(); }
};

// ---------------------------------------------------------------------------
// Feed-forward tables
// ---------------------------------------------------------------------------

/// PID conditioning after the parity check: discard on 00, PDPS(π) on the
/// first mode for H^n0, nothing for 0V^n.
FeedForwardRule b2g_rule();

/// ECC outcome handling folded together with the conversion to |t1'>. Acts on
/// the four modes that bypass the ECC. Labels 5, 6: PDPS(π) on modes 2 and 3;
/// labels 3, 4: PS(π/2); then PR(π/2) on modes 2 and 3, PDPS(π/2) on mode 2,
/// PDPS(-π/2) on mode 3 (all 1-based). Everything else is discarded.
FeedForwardRule g2a_rule();

/// Keep/discard at one A2C site. Corrections are applied jointly after both
/// sites, see cz_rule().
FeedForwardRule a2c_rule();

/// Post-processing of the two output modes keyed by the two A2C labels,
/// e.g. "31" = label 3 at the (1,2) site and label 1 at the (5,6) site.
FeedForwardRule cz_rule();

// ---------------------------------------------------------------------------
// Gadgets
// ---------------------------------------------------------------------------

/// Bell-to-GHZ: PBS on modes 1,2; PID on mode 2 (0-based) with b2g_rule().
/// Output branches have three modes, ordered (0, 1, 3) of the input.
GadgetResult b2g(const PureState& input, const std::string& site = "b2g");

/// Error-correction circuit before detection: PR(π/4) on both inputs, PBS,
/// PDPS(π/4) on both outputs, then a PID split on each. Two detector modes are
/// appended; rails are (a, b, M, M+1) = (pH, qH, pV, qV).
PureState ecc_pre_detection(const PureState& state, std::size_t mode_a, std::size_t mode_b);

/// ecc_pre_detection followed by the four-rail measurement. Labels 3-6 are
/// kept, everything else discarded. No corrections are applied.
Ensemble ecc(const PureState& state, std::size_t mode_a, std::size_t mode_b, const std::string& site = "ecc");

/// GHZ-to-ancilla on two three-mode registers (6 modes): ECC on modes 1 and 4,
/// then g2a_rule() on the remaining modes (0, 2, 3, 5).
GadgetResult g2a(const Ensemble& input, const std::string& site = "ecc");
GadgetResult g2a(const PureState& input, const std::string& site = "ecc");

/// A2C before detection: 50:50 BS on (x, y) then a PID split on each output.
PureState a2c_pre_detection(const PureState& state, std::size_t mode_x, std::size_t mode_y);

/// A2C: measurement of the four rails, kept iff exactly two clicks.
Ensemble a2c(const PureState& state, std::size_t mode_x, std::size_t mode_y, const std::string& site = "a2c");

inline const std::string kA2cSiteTop = "a2c(1,2)";
inline const std::string kA2cSiteBottom = "a2c(5,6)";

/// Controlled-phase on a two-mode, two-qubit input using the ancilla on modes
/// 2-5 (1-based). A2C on (1,2) and (6,5), then cz_rule() on modes 3 and 4.
GadgetResult cz_gate(const PureState& input, const Ensemble& ancilla);
GadgetResult cz_gate(const PureState& input, const PureState& ancilla);
GadgetResult cz_gate(const PureState& input);

struct PipelineResult {
    GadgetResult ancilla;  // two B2G runs followed by G2A
    GadgetResult gate;     // full ensemble after the controlled-phase stage

    [[nodiscard]] double ancilla_probability() const { return ancilla.success_probability(); }
    [[nodiscard]] double total_probability() const { return gate.success_probability(); }
    [[nodiscard]] double gate_probability_given_ancilla() const {
        return total_probability() / ancilla_probability();
    }
};

/// Bell pairs -> two B2G -> G2A -> controlled-phase on `input`. Each register is
/// a four-mode pair of Bell states, defaulting to |Φ+>|Φ+>.
PipelineResult cz_full_pipeline(const PureState& input);
PipelineResult cz_full_pipeline(const PureState& input, const PureState& register_a,
                                const PureState& register_b);

}  // namespace polarsim
