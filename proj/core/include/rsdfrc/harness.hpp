// SPDX-License-Identifier: Apache-2.0
//
// rsdfrc: hybrid beamforming for reconfigurable-subarray radar-communication systems
// Copyright (C) 2026 The rsdfrc authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rsdfrc/metrics.hpp"
#include "rsdfrc/model.hpp"
#include "rsdfrc/wpdd.hpp"

namespace rsdfrc {

inline constexpr int results_schema_version = 1;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class SweepVariable { gamma_db, P_T_dbm, K, M_T };

std::string to_string(SweepVariable v);

struct BeampatternSpec {
    Architecture arch = Architecture::RS;
    double gamma_db = 18.0;
    int trial = 0;
    double step_deg = 0.5;
};

// Everything is linear (watts, ratios, radians) after loading.
struct ExperimentSpec {
    SweepVariable sweep = SweepVariable::gamma_db;
    std::vector<double> values = {10.0};
    std::vector<Architecture> archs = {Architecture::RS};
    int trials = 50;
    std::uint64_t seed = 1;
    double gamma = 10.0;
    std::vector<double> p_fa = {1e-6, 1e-4};
    std::string output = "results.csv";

    SystemConfig system;
    PathLossModel path_loss;
    double distance_m = 80.0;
    int paths = 3;
    RadarScene scene;
    PowerModel power;
    PddParams solver;
    BeampatternSpec beampattern;

    // Throws ConfigError with a readable message.
    void validate() const;
};

// YAML loader; unknown keys, wrong types and out-of-range values raise ConfigError.
ExperimentSpec parse_spec(const std::string& yaml_text);
ExperimentSpec load_spec(const std::string& path);

// Annotated example of every accepted key with its unit and default.
std::string spec_schema();

// splitmix64 chain over (master, trial, sweep index, fnv1a64(tag)).
std::uint64_t derive_seed(std::uint64_t master, int trial, int sweep_index, std::string_view tag);

// FNV-1a 64-bit digest used for the manifest.
std::uint64_t fnv1a64(std::string_view bytes);

struct TrialRecord {
    int sweep_index = 0;
    double sweep_value = 0.0;
    Architecture arch = Architecture::RS;
    int trial = 0;
    std::uint64_t seed = 0;
    SolveStatus status = SolveStatus::max_outer;
    double sum_rate = 0.0;
    double scnr = 0.0;
    double h = 0.0;
    int outer_iters = 0;
    double wall_time = 0.0;
    double power_w = 0.0;
    double ee = 0.0;
    std::vector<double> pd;

    bool infeasible() const { return status == SolveStatus::infeasible; }
};

struct ResultsTable {
    std::vector<double> p_fa;
    // Ordered by (sweep index, architecture position in the spec, trial) whatever the thread count.
    std::vector<TrialRecord> rows;

    bool any_infeasible() const;
};

struct SweepCell {
    SystemConfig cfg;
    double gamma = 0.0;
};

// System configuration and SCNR target for one sweep value.
SweepCell sweep_cell(const ExperimentSpec& spec, int sweep_index);

// Seed of a per-trial stream ("channel" or "init"). It leaves out the sweep index and the architecture,
// so every cell of a trial starts from the same channel draw and initial analog network.
std::uint64_t trial_seed(const ExperimentSpec& spec, int trial, std::string_view tag);

ChannelSet trial_channel(const ExperimentSpec& spec, const SystemConfig& cfg, int trial);

// Solves one architecture on the shared channel of the trial.
SolveResult solve_cell(const ExperimentSpec& spec, int sweep_index, Architecture arch, int trial);

using ProgressFn = std::function<void(const TrialRecord&)>;

ResultsTable run_experiment(const ExperimentSpec& spec, int threads = 1, const ProgressFn& progress = {});

// Deterministic per-trial table: no timing columns, so identical specs give identical bytes.
void write_results_csv(const ResultsTable& table, const ExperimentSpec& spec, std::ostream& out);
void write_timing_csv(const ResultsTable& table, const ExperimentSpec& spec, std::ostream& out);
// Mean and sample standard deviation over feasible trials per (sweep value, architecture).
void write_summary_csv(const ResultsTable& table, const ExperimentSpec& spec, std::ostream& out);

struct RunManifest {
    std::string config_path;
    std::uint64_t config_hash = 0;
    std::uint64_t seed = 0;
    int trials = 0;
    int threads = 1;
    double wall_time = 0.0;
    std::vector<std::string> outputs;
};

std::string manifest_json(const RunManifest& m, const ExperimentSpec& spec);

// Angle grid from -90 to 90 degrees inclusive, in radians.
std::vector<double> beampattern_grid(double step_deg);

// Writes "angle_deg,power_db" rows, peak-normalized, for the stacked receive/transmit pair of bf.
void emit_beampattern(const BeamformerSet& bf, const std::vector<double>& grid, const SystemConfig& cfg,
                      const std::string& path);

}  // namespace rsdfrc
