// Copyright 2026 The polarsim Authors
// SPDX-License-Identifier: Apache-2.0

// polarsim: run a named experiment and write a JSON or CSV report.
//
//   polarsim --experiment cz --mode sample --samples 100000 --seed 42 --out cz.json
//
// Exit codes: 0 ok, 2 configuration error, 3 verification mismatch, 4 I/O error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "polarsim/errors.hpp"
#include "polarsim/experiment.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitMismatch = 3;
constexpr int kExitIo = 4;

nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw polarsim::IoError("cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return nlohmann::json::parse(buf.str());
    } catch (const nlohmann::json::exception& e) {
        throw polarsim::ConfigError(path + ": " + e.what());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Polarization-encoded linear-optics simulator"};

    std::string experiment;
    std::string mode = "enumerate";
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    std::string input_path;
    std::string circuit_path;
    std::string out_path;
    std::string format = "json";
    bool emit_states = false;
    int d = 4;

    app.add_option("--experiment", experiment, "b2g, g2a, a2c, cz, pipeline, pid-chain, verify, run-circuit")
        ->required();
    app.add_option("--mode", mode, "enumerate or sample")->check(CLI::IsMember({"enumerate", "sample"}));
    auto* samples_opt = app.add_option("--samples", samples, "number of samples (sample mode)");
    auto* seed_opt = app.add_option("--seed", seed, "64-bit generator seed (sample mode)");
    app.add_option("--input", input_path, "input state JSON file");
    app.add_option("--circuit", circuit_path, "element list JSON file (run-circuit)");
    app.add_option("--out", out_path, "report file (default: stdout)");
    app.add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_flag("--emit-states", emit_states, "include kept states in the report");
    app.add_option("--d", d, "chain length for pid-chain");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    try {
        polarsim::ExperimentConfig config;
        config.experiment = experiment;
        config.mode = polarsim::run_mode_from_string(mode);
        if (samples_opt->count() > 0) config.samples = samples;
        if (seed_opt->count() > 0) config.seed = seed;
        config.emit_states = emit_states;
        config.d = d;
        if (!input_path.empty()) {
            try {
                config.input = polarsim::state_from_json(read_json_file(input_path));
            } catch (const nlohmann::json::exception& e) {
                throw polarsim::ConfigError(input_path + ": " + e.what());
            }
        }
        if (!circuit_path.empty()) {
            try {
                config.circuit = polarsim::circuit_from_json(read_json_file(circuit_path));
            } catch (const nlohmann::json::exception& e) {
                throw polarsim::ConfigError(circuit_path + ": " + e.what());
            }
        }

        const polarsim::RunReport report = polarsim::run(config);
        const std::string text = format == "csv" ? report.to_csv() : report.to_json().dump(2) + "\n";
        if (out_path.empty()) {
            std::cout << text;
        } else {
            std::ofstream out(out_path, std::ios::binary);
            if (!out || !(out << text) || !out.flush()) throw polarsim::IoError("cannot write " + out_path);
        }
        std::cerr << "wall time: " << report.wall_time_seconds << " s\n";
        return report.verified() ? 0 : kExitMismatch;
    } catch (const polarsim::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const polarsim::Error& e) {
        // Malformed states and circuits surface as domain errors; treat them as config errors.
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }
}
