// Copyright 2026 The polarsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "polarsim/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <random>
#include <sstream>

#include "polarsim/detection.hpp"
#include "polarsim/errors.hpp"
#include "polarsim/named_states.hpp"

namespace polarsim {

std::string to_string(RunMode m) { return m == RunMode::Enumerate ? "enumerate" : "sample"; }

RunMode run_mode_from_string(const std::string& s) {
    if (s == "enumerate") return RunMode::Enumerate;
    if (s == "sample") return RunMode::Sample;
    throw ConfigError("mode must be enumerate or sample, got '" + s + "'");
}

std::vector<std::string> experiment_names() {
    return {"b2g", "g2a", "a2c", "cz", "pipeline", "pid-chain", "verify", "run-circuit"};
}

void ExperimentConfig::validate() const {
    const auto names = experiment_names();
    if (std::find(names.begin(), names.end(), experiment) == names.end()) {
        throw ConfigError("unknown experiment '" + experiment + "'");
    }
    if (mode == RunMode::Sample) {
        if (!samples || *samples < 1) throw ConfigError("sample mode needs --samples >= 1");
        if (!seed) throw ConfigError("sample mode needs --seed");
    }
    if (experiment == "pid-chain" && (d < 2 || d > kDefaultPhotonCap)) {
        throw ConfigError("pid-chain needs 2 <= d <= " + std::to_string(kDefaultPhotonCap));
    }
    if (experiment == "run-circuit") {
        if (!input) throw ConfigError("run-circuit needs an input state");
        for (const auto& e : circuit) {
            try {
                e.validate(input->modes());
            } catch (const DimensionError& err) {
                throw ConfigError(std::string("circuit does not fit the input: ") + err.what());
            }
        }
    }
}

std::size_t draw_index(const std::vector<double>& weights, std::uint64_t x) {
    const double u = static_cast<double>(x >> 11) * 0x1.0p-53;
    double total = 0.0;
    for (double w : weights) total += w;
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        acc += weights[i] / total;
        if (u < acc) return i;
    }
    return weights.empty() ? 0 : weights.size() - 1;
}

bool RunReport::verified() const {
    return std::all_of(tables.begin(), tables.end(), [](const TableReport& t) { return t.all_match(); });
}

nlohmann::json RunReport::to_json() const {
    nlohmann::json j;
    j["experiment"] = config.experiment;
    j["mode"] = polarsim::to_string(config.mode);
    if (config.mode == RunMode::Sample) {
        j["samples"] = *config.samples;
        j["seed"] = *config.seed;
    }
    if (config.experiment == "pid-chain") j["d"] = config.d;
    if (config.input) j["input"] = polarsim::to_json(*config.input);
    if (!config.circuit.empty()) {
        nlohmann::json c = nlohmann::json::array();
        for (const auto& e : config.circuit) c.push_back(polarsim::to_json(e));
        j["circuit"] = c;
    }
    j["success_probability"] = success_probability;
    j["metrics"] = metrics;

    const char* value_key = config.mode == RunMode::Enumerate ? "probability" : "frequency";
    nlohmann::json outs = nlohmann::json::array();
    for (const auto& o : outcomes) {
        nlohmann::json row{{"label", o.label}, {"disposition", polarsim::to_string(o.disposition)}, {value_key, o.value}};
        if (config.mode == RunMode::Sample) row["count"] = o.count;
        if (!o.states.empty()) {
            nlohmann::json st = nlohmann::json::array();
            for (const auto& [w, psi] : o.states) st.push_back({{"weight", w}, {"state", polarsim::to_json(psi)}});
            row["states"] = st;
        }
        outs.push_back(row);
    }
    j["outcomes"] = outs;

    if (!tables.empty()) {
        nlohmann::json ts = nlohmann::json::array();
        for (const auto& t : tables) {
            nlohmann::json rows = nlohmann::json::array();
            for (const auto& r : t.rows) {
                rows.push_back({{"source", r.source},
                                {"match", r.match},
                                {"max_deviation", r.max_deviation},
                                {"phase_offset", r.phase_offset},
                                {"detail", r.detail}});
            }
            ts.push_back({{"table", t.table_id}, {"match", t.all_match()}, {"rows", rows}});
        }
        j["tables"] = ts;
    }
    return j;
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + "\"";
}

std::string number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

std::string RunReport::to_csv() const {
    std::ostringstream out;
    out << "experiment,label,disposition,probability_or_frequency\n";
    const std::string exp = csv_field(config.experiment);
    for (const auto& o : outcomes) {
        out << exp << ',' << csv_field(o.label) << ',' << polarsim::to_string(o.disposition) << ','
            << number(o.value) << '\n';
    }
    // verify: one line per table row, value is the residual.
    for (const auto& t : tables) {
        for (const auto& r : t.rows) {
            out << exp << ',' << csv_field(r.source) << ',' << (r.match ? "match" : "mismatch") << ','
                << number(r.max_deviation) << '\n';
        }
    }
    return out.str();
}

namespace {

// Reference controlled-phase: |VV> picks up a sign.
PureState cz_reference(const PureState& input) {
    PureState out(input.modes(), input.photon_cap());
    for (const auto& [v, a] : input.terms()) {
        const bool vv = v.modes.size() == 2 && v.modes[0] == kV && v.modes[1] == kV;
        out.add(v, vv ? -a : a);
    }
    return out;
}

double overlap(const PureState& a, const PureState& b) { return std::norm(inner_product(a, b)); }

bool ends_at_a2c(const std::string& label) {
    const auto cut = label.rfind(';');
    const std::string last = cut == std::string::npos ? label : label.substr(cut + 1);
    return last.rfind("a2c", 0) == 0;
}

// Metrics are computed from (weight, row) pairs so they work for exact
// probabilities and for sampled frequencies alike.
void add_metrics(RunReport& report, const std::vector<OutcomeRow>& rows, const std::vector<double>& weight,
                 const PureState& input) {
    const std::string& exp = report.config.experiment;
    double keep = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].disposition == Disposition::Keep) keep += weight[i];
    }
    report.metrics["keep_probability"] = keep;
    report.success_probability = keep;

    auto kept_overlap = [&](const PureState& target) {
        double s = 0.0;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].disposition == Disposition::Keep) s += weight[i] * overlap(target, rows[i].state);
        }
        return s;
    };

    if (exp == "b2g") {
        const double ghz = kept_overlap(states::ghz());
        report.metrics["ghz_probability"] = ghz;
        report.metrics["ghz_fidelity_of_kept"] = keep > 0.0 ? ghz / keep : 0.0;
        report.success_probability = ghz;
    } else if (exp == "g2a") {
        report.metrics["t1_fidelity_of_kept"] = keep > 0.0 ? kept_overlap(states::t1_prime()) / keep : 0.0;
    } else if (exp == "cz" || exp == "pipeline") {
        const PureState want = cz_reference(input).normalized();
        report.metrics["cz_fidelity_of_kept"] = keep > 0.0 ? kept_overlap(want) / keep : 0.0;
        if (exp == "pipeline") {
            double ancilla = 0.0;
            for (std::size_t i = 0; i < rows.size(); ++i) {
                if (rows[i].disposition == Disposition::Keep || ends_at_a2c(rows[i].label)) ancilla += weight[i];
            }
            report.metrics["ancilla_probability"] = ancilla;
            report.metrics["gate_probability_given_ancilla"] = ancilla > 0.0 ? keep / ancilla : 0.0;
        }
    } else if (exp == "pid-chain") {
        const PureState want = states::phi_d(report.config.d - 1);
        report.metrics["fidelity_of_kept"] = keep > 0.0 ? kept_overlap(want) / keep : 0.0;
    }
}

// Per-label summary of rows, optionally with the kept states.
void summarize(RunReport& report, const std::vector<OutcomeRow>& rows, const std::vector<double>& weight,
               const std::vector<std::uint64_t>& counts) {
    std::map<std::string, OutcomeSummary> by_label;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        auto& o = by_label[rows[i].label];
        o.label = rows[i].label;
        o.disposition = rows[i].disposition;
        o.value += weight[i];
        if (!counts.empty()) o.count += counts[i];
        if (report.config.emit_states && rows[i].disposition == Disposition::Keep && weight[i] > 0.0) {
            o.states.emplace_back(weight[i], rows[i].state);
        }
    }
    for (auto& [label, o] : by_label) report.outcomes.push_back(std::move(o));
}

std::vector<OutcomeRow> rows_for(const ExperimentConfig& config, PureState& input) {
    const std::string& exp = config.experiment;
    if (exp == "pid-chain") {
        input = states::phi_d(config.d);
        return outcome_table_of(pid(input, static_cast<std::size_t>(config.d - 1), phi_plus_restore_rule(0))).rows;
    }
    if (exp == "run-circuit") {
        const PureState out = apply_circuit(input, config.circuit);
        return {{"final", Disposition::Keep, out.norm_squared(), out.normalized()}};
    }
    return enumerate_exact(exp, input).rows;
}

}  // namespace

RunReport run(const ExperimentConfig& config) {
    config.validate();
    const auto start = std::chrono::steady_clock::now();
    RunReport report;
    report.config = config;

    if (config.experiment == "verify") {
        std::size_t matched = 0;
        std::size_t total = 0;
        for (int id = 1; id <= 4; ++id) {
            report.tables.push_back(verify_table(id));
            for (const auto& r : report.tables.back().rows) {
                ++total;
                if (r.match) ++matched;
            }
        }
        report.metrics["rows_matched"] = static_cast<double>(matched);
        report.metrics["rows_total"] = static_cast<double>(total);
        report.success_probability = static_cast<double>(matched) / static_cast<double>(total);
    } else {
        PureState input;
        if (config.input) {
            input = *config.input;
        } else if (config.experiment != "pid-chain") {
            input = default_input(config.experiment);
        }
        const std::vector<OutcomeRow> rows = rows_for(config, input);

        std::vector<double> weight;
        std::vector<std::uint64_t> counts;
        for (const auto& r : rows) weight.push_back(r.probability);
        if (config.mode == RunMode::Sample) {
            std::mt19937_64 gen(*config.seed);
            counts.assign(rows.size(), 0);
            for (std::uint64_t n = 0; n < *config.samples; ++n) ++counts[draw_index(weight, gen())];
            for (std::size_t i = 0; i < rows.size(); ++i) {
                weight[i] = static_cast<double>(counts[i]) / static_cast<double>(*config.samples);
            }
        }
        summarize(report, rows, weight, counts);
        add_metrics(report, rows, weight, input);
    }
    report.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

RunReport pid_chain(int d) {
    ExperimentConfig c;
    c.experiment = "pid-chain";
    c.d = d;
    return run(c);
}

}  // namespace polarsim
