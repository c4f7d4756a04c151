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

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "rsdfrc/harness.hpp"

namespace fs = std::filesystem;
using namespace rsdfrc;

namespace {

enum Exit { ok = 0, failure = 1, config_error = 2, infeasible = 3 };

struct Common {
    std::string spec_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
    std::string out;
    int threads = 1;
    bool strict = false;
    bool quiet = false;
};

std::string slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ExperimentSpec load(const Common& c, std::string& text)
{
    text = slurp(c.spec_path);
    ExperimentSpec spec;
    try {
        spec = parse_spec(text);
    } catch (const ConfigError& e) {
        throw ConfigError(c.spec_path + ": " + e.what());
    }
    if (c.seed) spec.seed = *c.seed;
    if (c.trials) spec.trials = *c.trials;
    spec.validate();
    return spec;
}

fs::path sibling(const fs::path& out, const std::string& suffix)
{
    fs::path p = out;
    p.replace_extension();
    return fs::path(p.string() + suffix);
}

void write_file(const fs::path& path, const std::string& body)
{
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    f << body;
    if (!f) throw std::runtime_error("write failed for '" + path.string() + "'");
}

int cmd_run(const Common& c)
{
    std::string text;
    const ExperimentSpec spec = load(c, text);
    const fs::path out = c.out.empty() ? fs::path(spec.output) : fs::path(c.out);
    const int threads = c.threads > 0 ? c.threads : std::max(1u, std::thread::hardware_concurrency());

    const size_t total = spec.values.size() * spec.archs.size() * static_cast<size_t>(spec.trials);
    size_t done = 0;
    const auto t0 = std::chrono::steady_clock::now();
    const ResultsTable table = run_experiment(spec, threads, [&](const TrialRecord& r) {
        ++done;
        if (!c.quiet)
            std::cerr << fmt::format("[{}/{}] {}={} {} trial {}: {} R={:.4f} bit/s/Hz\n", done, total,
                                     to_string(spec.sweep), r.sweep_value, to_string(r.arch), r.trial,
                                     to_string(r.status), r.sum_rate);
    });
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    std::ostringstream results, summary, timing;
    write_results_csv(table, spec, results);
    write_summary_csv(table, spec, summary);
    write_timing_csv(table, spec, timing);
    const fs::path summary_path = sibling(out, ".summary.csv");
    const fs::path timing_path = sibling(out, ".timing.csv");
    const fs::path manifest_path = sibling(out, ".manifest.json");
    write_file(out, results.str());
    write_file(summary_path, summary.str());
    write_file(timing_path, timing.str());

    RunManifest m;
    m.config_path = c.spec_path;
    m.config_hash = fnv1a64(text);
    m.seed = spec.seed;
    m.trials = spec.trials;
    m.threads = threads;
    m.wall_time = wall;
    m.outputs = {out.string(), summary_path.string(), timing_path.string()};
    write_file(manifest_path, manifest_json(m, spec));

    int bad = 0;
    for (const auto& r : table.rows) bad += r.infeasible();
    std::cout << fmt::format("wrote {} rows to {} ({} infeasible, {:.1f} s)\n", table.rows.size(), out.string(),
                             bad, wall);
    return c.strict && bad > 0 ? infeasible : ok;
}

int cmd_beampattern(const Common& c)
{
    std::string text;
    const ExperimentSpec spec = load(c, text);
    ExperimentSpec one = spec;
    one.sweep = SweepVariable::gamma_db;
    one.values = {spec.beampattern.gamma_db};
    const SolveResult res = solve_cell(one, 0, spec.beampattern.arch, spec.beampattern.trial);
    if (res.status == SolveStatus::infeasible) {
        std::cerr << fmt::format("{} at {} dB is infeasible for trial {}; no beampattern written\n",
                                 to_string(spec.beampattern.arch), spec.beampattern.gamma_db, spec.beampattern.trial);
        return c.strict ? infeasible : failure;
    }
    const std::string out = c.out.empty() ? "beampattern.csv" : c.out;
    if (fs::path(out).has_parent_path()) fs::create_directories(fs::path(out).parent_path());
    emit_beampattern(res.bf, beampattern_grid(spec.beampattern.step_deg), one.system, out);
    std::cout << fmt::format("{} at {} dB: {} R={:.4f} bit/s/Hz SCNR={:.3f} dB -> {}\n",
                             to_string(spec.beampattern.arch), spec.beampattern.gamma_db, to_string(res.status),
                             res.sum_rate, linear_to_db(res.scnr), out);
    return ok;
}

int cmd_validate(const Common& c)
{
    std::string text;
    const ExperimentSpec spec = load(c, text);
    std::cout << fmt::format("{}: ok ({} sweep values x {} architectures x {} trials)\n", c.spec_path,
                             spec.values.size(), spec.archs.size(), spec.trials);
    return ok;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Hybrid beamforming simulator for radar-communication systems"};
    app.set_version_flag("--version", std::string(RSDFRC_CLI_VERSION));
    app.require_subcommand(1);

    Common c;
    auto add_common = [&](CLI::App* sub, bool run_flags) {
        sub->add_option("spec", c.spec_path, "Experiment file (YAML)")->required()->check(CLI::ExistingFile);
        sub->add_option("--seed", c.seed, "Override the master seed");
        sub->add_option("--trials", c.trials, "Override the Monte-Carlo trial count")->check(CLI::PositiveNumber);
        if (run_flags) {
            sub->add_option("--out", c.out, "Output file");
            sub->add_option("--threads", c.threads, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
            sub->add_flag("--strict", c.strict, "Exit with code 3 when any trial is infeasible");
            sub->add_flag("-q,--quiet", c.quiet, "No per-trial progress on stderr");
        }
    };
    auto* run = app.add_subcommand("run", "Run a Monte-Carlo sweep and write CSV results");
    add_common(run, true);
    auto* bp = app.add_subcommand("beampattern", "Solve one instance and write its beampattern");
    add_common(bp, true);
    auto* val = app.add_subcommand("validate", "Check an experiment file and exit");
    add_common(val, false);
    auto* schema = app.add_subcommand("schema", "Print an annotated experiment file with every key");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : config_error;
    }

    try {
        if (*run) return cmd_run(c);
        if (*bp) return cmd_beampattern(c);
        if (*val) return cmd_validate(c);
        if (*schema) {
            std::cout << spec_schema();
            return ok;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return config_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return failure;
    }
    return ok;
}
