// Copyright 2026 The polarsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "polarsim/elements.hpp"
#include "polarsim/fock.hpp"
#include "polarsim/oracle.hpp"

namespace polarsim {

enum class RunMode { Enumerate, Sample };
std::string to_string(RunMode m);
RunMode run_mode_from_string(const std::string& s);

std::vector<std::string> experiment_names();

struct ExperimentConfig {
    std::string experiment;
    RunMode mode = RunMode::Enumerate;
    std::optional<std::uint64_t> samples;
    std::optional<std::uint64_t> seed;
    /// Replaces the experiment's default input state.
    std::optional<PureState> input;
    /// Elements for run-circuit.
    std::vector<ElementDescriptor> circuit;
    bool emit_states = false;
    /// Chain length for pid-chain.
    int d = 4;

    /// Throws ConfigError.
    void validate() const;
};

struct OutcomeSummary {
    std::string label;
    Disposition disposition = Disposition::Keep;
    /// Probability (enumerate) or frequency (sample).
    double value = 0.0;
    std::uint64_t count = 0;  // sample mode only
    std::vector<std::pair<double, PureState>> states;  // with emit_states, kept rows
};

struct RunReport {
    ExperimentConfig config;
    std::vector<OutcomeSummary> outcomes;  // sorted by label
    double success_probability = 0.0;
    std::map<std::string, double> metrics;
    std::vector<TableReport> tables;  // verify only
    double wall_time_seconds = 0.0;   // never serialized, so reports stay reproducible

    /// False only for verify with a mismatching row.
    [[nodiscard]] bool verified() const;
    [[nodiscard]] nlohmann::json to_json() const;
    /// experiment,label,disposition,probability_or_frequency
    [[nodiscard]] std::string to_csv() const;
};

RunReport run(const ExperimentConfig& config);

/// PID with Φ+ restoring feed-forward on |Φ+_d>, scored against |Φ+_{d-1}>.
RunReport pid_chain(int d);

/// Index drawn from `weights` (canonical order) with u = (x >> 11) * 2^-53.
std::size_t draw_index(const std::vector<double>& weights, std::uint64_t x);

}  // namespace polarsim
