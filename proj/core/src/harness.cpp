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

#include "rsdfrc/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <fmt/ostream.h>
#include <yaml-cpp/yaml.h>

#include "json.hpp"

#include "rsdfrc/pc_variant.hpp"

#ifndef RSDFRC_VERSION
#define RSDFRC_VERSION "unknown"
#endif

namespace rsdfrc {

namespace {

constexpr double deg = pi / 180.0;

std::string where(const YAML::Node& n)
{
    const auto m = n.Mark();
    if (m.line < 0) return {};
    return fmt::format(" (line {})", m.line + 1);
}

void check_keys(const YAML::Node& node, const std::string& section, const std::set<std::string>& allowed)
{
    if (!node.IsMap()) throw ConfigError(fmt::format("section '{}' must be a mapping{}", section, where(node)));
    for (const auto& kv : node) {
        const auto key = kv.first.as<std::string>();
        if (!allowed.count(key))
            throw ConfigError(fmt::format("unknown key '{}' in section '{}'{}", key, section, where(kv.first)));
    }
}

template <class T>
void read(const YAML::Node& sec, const std::string& section, const char* key, T& out)
{
    const YAML::Node n = sec[key];
    if (!n) return;
    try {
        out = n.as<T>();
    } catch (const YAML::BadConversion&) {
        throw ConfigError(fmt::format("'{}.{}' has the wrong type{}", section, key, where(n)));
    }
}

template <class T>
void read_list(const YAML::Node& sec, const std::string& section, const char* key, std::vector<T>& out)
{
    const YAML::Node n = sec[key];
    if (!n) return;
    if (!n.IsSequence()) throw ConfigError(fmt::format("'{}.{}' must be a list{}", section, key, where(n)));
    std::vector<T> v;
    try {
        for (const auto& e : n) v.push_back(e.as<T>());
    } catch (const YAML::BadConversion&) {
        throw ConfigError(fmt::format("'{}.{}' has an entry of the wrong type{}", section, key, where(n)));
    }
    out = std::move(v);
}

SweepVariable parse_sweep(const std::string& s)
{
    if (s == "gamma_db") return SweepVariable::gamma_db;
    if (s == "P_T_dbm") return SweepVariable::P_T_dbm;
    if (s == "K") return SweepVariable::K;
    if (s == "M_T") return SweepVariable::M_T;
    throw ConfigError("experiment.sweep must be one of gamma_db, P_T_dbm, K, M_T (got '" + s + "')");
}

Architecture parse_arch(const std::string& s, const char* key)
{
    try {
        return parse_architecture(s);
    } catch (const std::exception&) {
        throw ConfigError(fmt::format("{}: unknown architecture '{}'", key, s));
    }
}

bool solvable(Architecture a)
{
    return a == Architecture::RS || a == Architecture::PC || a == Architecture::FD;
}

std::string num(double x)
{
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return fmt::format("{}", x);
}

std::string pfa_label(double p)
{
    return fmt::format("pd_{:g}", p);
}

}  // namespace

std::string to_string(SweepVariable v)
{
    switch (v) {
    case SweepVariable::gamma_db: return "gamma_db";
    case SweepVariable::P_T_dbm: return "P_T_dbm";
    case SweepVariable::K: return "K";
    case SweepVariable::M_T: return "M_T";
    }
    return "?";
}

void ExperimentSpec::validate() const
{
    if (trials < 1) throw ConfigError("experiment.trials must be at least 1");
    if (values.empty()) throw ConfigError("experiment.values must not be empty");
    if (archs.empty()) throw ConfigError("experiment.architectures must not be empty");
    for (Architecture a : archs)
        if (!solvable(a)) throw ConfigError("architecture " + to_string(a) + " has no solver; use RS, PC or FD");
    std::set<Architecture> seen(archs.begin(), archs.end());
    if (seen.size() != archs.size()) throw ConfigError("experiment.architectures lists an entry twice");
    if (!(gamma >= 0)) throw ConfigError("experiment.gamma_db must be finite");
    for (double p : p_fa)
        if (!(p > 0 && p < 1)) throw ConfigError("experiment.p_fa entries must lie in (0, 1)");
    if (!(distance_m > 0)) throw ConfigError("channel.distance_m must be positive");
    if (paths < 1) throw ConfigError("channel.paths must be at least 1");
    if (!(path_loss.sigma_shadow >= 0)) throw ConfigError("channel.shadowing_db must be nonnegative");
    if (!(beampattern.step_deg > 0 && beampattern.step_deg <= 90))
        throw ConfigError("beampattern.step_deg must lie in (0, 90]");
    if (beampattern.trial < 0) throw ConfigError("beampattern.trial must be nonnegative");
    if (!solvable(beampattern.arch)) throw ConfigError("beampattern.architecture must be RS, PC or FD");
    if (solver.rho0 <= 0 || solver.c <= 0 || solver.c >= 1 || solver.max_inner < 1 || solver.max_outer < 1 ||
        solver.eps_inner <= 0 || solver.eps_outer <= 0 || solver.margin < 0)
        throw ConfigError("solver: need rho0 > 0, 0 < c < 1, positive tolerances and iteration limits");

    try {
        scene.validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("scene: ") + e.what());
    }
    for (size_t s = 0; s < values.size(); ++s) {
        const SweepCell cell = sweep_cell(*this, static_cast<int>(s));
        try {
            cell.cfg.validate();
        } catch (const std::exception& e) {
            throw ConfigError(fmt::format("sweep value {}: {}", values[s], e.what()));
        }
        if (!(cell.gamma >= 0)) throw ConfigError("SCNR target must be nonnegative");
        for (Architecture a : archs) {
            if (a != Architecture::PC) continue;
            if (cell.cfg.M_T % cell.cfg.N_RF_t != 0 || cell.cfg.M_R % cell.cfg.N_RF_r != 0)
                throw ConfigError(fmt::format("sweep value {}: PC needs N_RF to divide the antenna counts",
                                              values[s]));
        }
    }
}

ExperimentSpec parse_spec(const std::string& yaml_text)
{
    YAML::Node root;
    try {
        root = YAML::Load(yaml_text);
    } catch (const YAML::Exception& e) {
        throw ConfigError(std::string("YAML syntax error: ") + e.what());
    }
    ExperimentSpec s;
    if (!root || root.IsNull()) {
        s.validate();
        return s;
    }
    check_keys(root, "<root>", {"experiment", "system", "channel", "scene", "power", "solver", "beampattern"});

    if (const auto n = root["experiment"]) {
        check_keys(n, "experiment",
                   {"sweep", "values", "architectures", "trials", "seed", "gamma_db", "p_fa", "output"});
        std::string sweep = to_string(s.sweep);
        read(n, "experiment", "sweep", sweep);
        s.sweep = parse_sweep(sweep);
        read_list(n, "experiment", "values", s.values);
        std::vector<std::string> archs;
        read_list(n, "experiment", "architectures", archs);
        if (n["architectures"]) {
            s.archs.clear();
            for (const auto& a : archs) s.archs.push_back(parse_arch(a, "experiment.architectures"));
        }
        read(n, "experiment", "trials", s.trials);
        read(n, "experiment", "seed", s.seed);
        double gamma_db = linear_to_db(s.gamma);
        read(n, "experiment", "gamma_db", gamma_db);
        s.gamma = db_to_linear(gamma_db);
        read_list(n, "experiment", "p_fa", s.p_fa);
        read(n, "experiment", "output", s.output);
    }

    if (const auto n = root["system"]) {
        const std::string sec = "system";
        check_keys(n, sec, {"M_T", "M_R", "N_RF_t", "N_RF_r", "K", "M_U", "d_s", "P_T_dbm", "sigma2_user_dbm",
                            "sigma2_radar_w", "spacing"});
        SystemConfig& c = s.system;
        read(n, sec, "M_T", c.M_T);
        read(n, sec, "M_R", c.M_R);
        read(n, sec, "N_RF_t", c.N_RF_t);
        read(n, sec, "N_RF_r", c.N_RF_r);
        read(n, sec, "K", c.K);
        read(n, sec, "M_U", c.M_U);
        read(n, sec, "d_s", c.d_s);
        if (n["P_T_dbm"]) {
            double v = 0;
            read(n, sec, "P_T_dbm", v);
            c.P_T = dbm_to_watts(v);
        }
        if (n["sigma2_user_dbm"]) {
            double v = 0;
            read(n, sec, "sigma2_user_dbm", v);
            c.sigma2_user = dbm_to_watts(v);
        }
        read(n, sec, "sigma2_radar_w", c.sigma2_radar);
        read(n, sec, "spacing", c.spacing);
    }

    if (const auto n = root["channel"]) {
        const std::string sec = "channel";
        check_keys(n, sec, {"distance_m", "paths", "alpha_db", "beta", "shadowing_db"});
        read(n, sec, "distance_m", s.distance_m);
        read(n, sec, "paths", s.paths);
        read(n, sec, "alpha_db", s.path_loss.alpha);
        read(n, sec, "beta", s.path_loss.beta);
        read(n, sec, "shadowing_db", s.path_loss.sigma_shadow);
    }

    if (const auto n = root["scene"]) {
        const std::string sec = "scene";
        check_keys(n, sec, {"theta0_deg", "clutter_deg", "sigma0_sq_db", "sigmaC_sq_db"});
        double t0 = s.scene.theta_0 / deg;
        read(n, sec, "theta0_deg", t0);
        s.scene.theta_0 = t0 * deg;
        if (n["clutter_deg"]) {
            std::vector<double> cl;
            read_list(n, sec, "clutter_deg", cl);
            s.scene.theta_j.clear();
            for (double a : cl) s.scene.theta_j.push_back(a * deg);
        }
        double s0 = linear_to_db(s.scene.sigma0_sq), sc = linear_to_db(s.scene.sigmaC_sq);
        read(n, sec, "sigma0_sq_db", s0);
        read(n, sec, "sigmaC_sq_db", sc);
        s.scene.sigma0_sq = db_to_linear(s0);
        s.scene.sigmaC_sq = db_to_linear(sc);
    }

    if (const auto n = root["power"]) {
        const std::string sec = "power";
        check_keys(n, sec, {"P_BB", "P_RF", "P_PS", "P_SW"});
        read(n, sec, "P_BB", s.power.P_BB);
        read(n, sec, "P_RF", s.power.P_RF);
        read(n, sec, "P_PS", s.power.P_PS);
        read(n, sec, "P_SW", s.power.P_SW);
    }

    if (const auto n = root["solver"]) {
        const std::string sec = "solver";
        check_keys(n, sec, {"rho0", "c", "eps_inner", "eps_outer", "max_inner", "max_outer", "margin"});
        read(n, sec, "rho0", s.solver.rho0);
        read(n, sec, "c", s.solver.c);
        read(n, sec, "eps_inner", s.solver.eps_inner);
        read(n, sec, "eps_outer", s.solver.eps_outer);
        read(n, sec, "max_inner", s.solver.max_inner);
        read(n, sec, "max_outer", s.solver.max_outer);
        read(n, sec, "margin", s.solver.margin);
    }

    if (const auto n = root["beampattern"]) {
        const std::string sec = "beampattern";
        check_keys(n, sec, {"architecture", "gamma_db", "trial", "step_deg"});
        std::string a = to_string(s.beampattern.arch);
        read(n, sec, "architecture", a);
        s.beampattern.arch = parse_arch(a, "beampattern.architecture");
        read(n, sec, "gamma_db", s.beampattern.gamma_db);
        read(n, sec, "trial", s.beampattern.trial);
        read(n, sec, "step_deg", s.beampattern.step_deg);
    }

    s.validate();
    return s;
}

ExperimentSpec load_spec(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse_spec(ss.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

std::string spec_schema()
{
    return R"(# rsdfrc experiment file. Every section and key is optional; unknown keys are errors.
experiment:
  sweep: gamma_db          # gamma_db | P_T_dbm | K | M_T
  values: [10]             # sweep values in the unit of the sweep variable
  architectures: [RS]      # any of RS, PC, FD
  trials: 50               # Monte-Carlo channel draws per sweep value
  seed: 1                  # master seed
  gamma_db: 10             # SCNR target [dB] when the sweep is not over gamma
  p_fa: [1.0e-6, 1.0e-4]   # false-alarm probabilities for the detection columns
  output: results.csv
system:
  M_T: 16                  # transmit antennas
  M_R: 8                   # radar receive antennas
  N_RF_t: 4                # transmit RF chains
  N_RF_r: 4                # receive RF chains
  K: 2                     # users
  M_U: 2                   # antennas per user
  d_s: 1                   # streams per user
  P_T_dbm: 40              # transmit power budget [dBm]
  sigma2_user_dbm: -90     # user noise power [dBm]
  sigma2_radar_w: 0.2      # radar receiver noise power [W]
  spacing: 0.5             # element spacing in wavelengths
channel:
  distance_m: 80           # BS-user distance [m]
  paths: 3                 # propagation paths per user
  alpha_db: 72             # path-loss intercept [dB]
  beta: 2.92               # path-loss exponent
  shadowing_db: 8.7        # log-normal shadowing standard deviation [dB]
scene:
  theta0_deg: 0            # target direction [deg]
  clutter_deg: [-30, 30]   # clutter directions [deg]
  sigma0_sq_db: 10         # target reflection power [dB]
  sigmaC_sq_db: 20         # clutter reflection power [dB]
power:                     # component powers [W]
  P_BB: 0.2
  P_RF: 0.3
  P_PS: 0.05
  P_SW: 0.005
solver:
  rho0: 1                  # initial penalty
  c: 0.6                   # penalty shrink factor
  eps_inner: 1.0e-4
  eps_outer: 1.0e-4
  max_inner: 30
  max_outer: 100
  margin: 1.0e-3           # relative SCNR head-room enforced during the solve
beampattern:
  architecture: RS
  gamma_db: 18
  trial: 0                 # channel draw used (sweep index 0)
  step_deg: 0.5
)";
}

std::uint64_t fnv1a64(std::string_view bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t derive_seed(std::uint64_t master, int trial, int sweep_index, std::string_view tag)
{
    std::uint64_t s = splitmix64(master);
    s = mix_seed(s, static_cast<std::uint64_t>(trial));
    s = mix_seed(s, static_cast<std::uint64_t>(sweep_index));
    return mix_seed(s, fnv1a64(tag));
}

bool ResultsTable::any_infeasible() const
{
    return std::any_of(rows.begin(), rows.end(), [](const TrialRecord& r) { return r.infeasible(); });
}

SweepCell sweep_cell(const ExperimentSpec& spec, int sweep_index)
{
    SweepCell cell{spec.system, spec.gamma};
    const double v = spec.values.at(static_cast<size_t>(sweep_index));
    auto as_count = [&](const char* what) {
        if (v != std::floor(v) || v < 1) throw ConfigError(fmt::format("{} sweep value {} is not a count", what, v));
        return static_cast<int>(v);
    };
    switch (spec.sweep) {
    case SweepVariable::gamma_db: cell.gamma = db_to_linear(v); break;
    case SweepVariable::P_T_dbm: cell.cfg.P_T = dbm_to_watts(v); break;
    case SweepVariable::K: cell.cfg.K = as_count("K"); break;
    case SweepVariable::M_T: cell.cfg.M_T = as_count("M_T"); break;
    }
    return cell;
}

std::uint64_t trial_seed(const ExperimentSpec& spec, int trial, std::string_view tag)
{
    return derive_seed(spec.seed, trial, 0, tag);
}

ChannelSet trial_channel(const ExperimentSpec& spec, const SystemConfig& cfg, int trial)
{
    const std::vector<double> dist(static_cast<size_t>(cfg.K), spec.distance_m);
    const std::vector<int> L(static_cast<size_t>(cfg.K), spec.paths);
    return generate_channel(cfg, spec.path_loss, dist, L, trial_seed(spec, trial, "channel"));
}

SolveResult solve_cell(const ExperimentSpec& spec, int sweep_index, Architecture arch, int trial)
{
    const SweepCell cell = sweep_cell(spec, sweep_index);
    const ChannelSet ch = trial_channel(spec, cell.cfg, trial);
    const InitOptions init{trial_seed(spec, trial, "init")};
    if (arch == Architecture::PC) return pc_solve(cell.cfg, ch, spec.scene, cell.gamma, init, spec.solver);
    return solve(cell.cfg, ch, spec.scene, cell.gamma, arch, init, spec.solver);
}

ResultsTable run_experiment(const ExperimentSpec& spec, int threads, const ProgressFn& progress)
{
    spec.validate();
    const int S = static_cast<int>(spec.values.size());
    const int A = static_cast<int>(spec.archs.size());
    const int T = spec.trials;
    const size_t total = static_cast<size_t>(S) * A * T;

    ResultsTable table;
    table.p_fa = spec.p_fa;
    table.rows.resize(total);

    std::atomic<size_t> next{0};
    std::mutex mu;
    std::exception_ptr failure;

    auto work = [&] {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= total) return;
            {
                std::lock_guard<std::mutex> lock(mu);
                if (failure) return;
            }
            const int s = static_cast<int>(i / (static_cast<size_t>(A) * T));
            const int a = static_cast<int>((i / T) % A);
            const int t = static_cast<int>(i % T);
            try {
                TrialRecord r;
                r.sweep_index = s;
                r.sweep_value = spec.values[s];
                r.arch = spec.archs[a];
                r.trial = t;
                r.seed = trial_seed(spec, t, "channel");
                const SweepCell cell = sweep_cell(spec, s);
                const auto t0 = std::chrono::steady_clock::now();
                const SolveResult res = solve_cell(spec, s, r.arch, t);
                r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
                r.status = res.status;
                r.sum_rate = res.sum_rate;
                r.scnr = res.scnr;
                r.h = res.h;
                r.outer_iters = res.outer_iterations;
                r.power_w = total_power(r.arch, cell.cfg, spec.power);
                r.ee = energy_efficiency(res.sum_rate, r.arch, cell.cfg, spec.power);
                if (r.infeasible()) {
                    r.sum_rate = r.scnr = r.ee = std::nan("");
                    r.pd.assign(spec.p_fa.size(), std::nan(""));
                } else {
                    for (double p : spec.p_fa) r.pd.push_back(detection_probability(res.scnr, p));
                }
                if (progress) {
                    std::lock_guard<std::mutex> lock(mu);
                    progress(r);
                }
                table.rows[i] = std::move(r);
            } catch (...) {
                std::lock_guard<std::mutex> lock(mu);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };

    const int n = std::max(1, std::min<int>(threads, static_cast<int>(total)));
    if (n == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int k = 0; k < n; ++k) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);
    return table;
}

void write_results_csv(const ResultsTable& table, const ExperimentSpec& spec, std::ostream& out)
{
    out << "schema_version,sweep_variable,sweep_value,architecture,trial,channel_seed,status,infeasible,"
           "sum_rate_bps_hz,scnr_db,h_final,outer_iters,total_power_w,energy_efficiency";
    for (double p : table.p_fa) out << ',' << pfa_label(p);
    out << '\n';
    const std::string sweep = to_string(spec.sweep);
    for (const auto& r : table.rows) {
        out << results_schema_version << ',' << sweep << ',' << num(r.sweep_value) << ',' << to_string(r.arch)
            << ',' << r.trial << ',' << r.seed << ',' << to_string(r.status) << ',' << (r.infeasible() ? 1 : 0)
            << ',' << num(r.sum_rate) << ',' << num(r.scnr >= 0 ? linear_to_db(r.scnr) : r.scnr) << ','
            << num(r.h) << ',' << r.outer_iters << ',' << num(r.power_w) << ',' << num(r.ee);
        for (double pd : r.pd) out << ',' << num(pd);
        out << '\n';
    }
}

void write_timing_csv(const ResultsTable& table, const ExperimentSpec& spec, std::ostream& out)
{
    out << "schema_version,sweep_variable,sweep_value,architecture,trial,wall_time_s\n";
    const std::string sweep = to_string(spec.sweep);
    for (const auto& r : table.rows)
        out << results_schema_version << ',' << sweep << ',' << num(r.sweep_value) << ',' << to_string(r.arch)
            << ',' << r.trial << ',' << fmt::format("{:.6f}", r.wall_time) << '\n';
}

void write_summary_csv(const ResultsTable& table, const ExperimentSpec& spec, std::ostream& out)
{
    struct Acc {
        std::vector<std::vector<double>> cols;
        int n = 0;
        int infeasible = 0;
    };
    const size_t ncols = 4 + table.p_fa.size();
    std::map<std::pair<int, int>, Acc> groups;
    for (const auto& r : table.rows) {
        const int a = static_cast<int>(std::find(spec.archs.begin(), spec.archs.end(), r.arch) - spec.archs.begin());
        Acc& g = groups[{r.sweep_index, a}];
        if (g.cols.empty()) g.cols.resize(ncols);
        ++g.n;
        if (r.infeasible()) {
            ++g.infeasible;
            continue;
        }
        g.cols[0].push_back(r.sum_rate);
        g.cols[1].push_back(linear_to_db(std::max(r.scnr, 1e-300)));
        g.cols[2].push_back(r.ee);
        g.cols[3].push_back(static_cast<double>(r.outer_iters));
        for (size_t j = 0; j < table.p_fa.size(); ++j) g.cols[4 + j].push_back(r.pd[j]);
    }

    out << "schema_version,sweep_variable,sweep_value,architecture,trials,infeasible,sum_rate_mean,sum_rate_std,"
           "scnr_db_mean,scnr_db_std,energy_efficiency_mean,energy_efficiency_std,outer_iters_mean,outer_iters_std";
    for (double p : table.p_fa) out << ',' << pfa_label(p) << "_mean," << pfa_label(p) << "_std";
    out << '\n';
    for (const auto& [key, g] : groups) {
        out << results_schema_version << ',' << to_string(spec.sweep) << ',' << num(spec.values[key.first]) << ','
            << to_string(spec.archs[key.second]) << ',' << g.n << ',' << g.infeasible;
        for (const auto& c : g.cols) {
            double mean = std::nan(""), sd = std::nan("");
            if (!c.empty()) {
                mean = 0;
                for (double x : c) mean += x;
                mean /= c.size();
                sd = 0;
                for (double x : c) sd += (x - mean) * (x - mean);
                sd = c.size() > 1 ? std::sqrt(sd / (c.size() - 1)) : 0.0;
            }
            out << ',' << num(mean) << ',' << num(sd);
        }
        out << '\n';
    }
}

std::string manifest_json(const RunManifest& m, const ExperimentSpec& spec)
{
    nlohmann::ordered_json j;
    j["schema_version"] = results_schema_version;
    j["code_version"] = RSDFRC_VERSION;
    j["config_path"] = m.config_path;
    j["config_fnv1a64"] = fmt::format("{:016x}", m.config_hash);
    j["master_seed"] = m.seed;
    j["trials"] = m.trials;
    j["threads"] = m.threads;
    j["sweep_variable"] = to_string(spec.sweep);
    j["sweep_values"] = spec.values;
    std::vector<std::string> archs;
    for (Architecture a : spec.archs) archs.push_back(to_string(a));
    j["architectures"] = archs;
    j["seed_derivation"] = "splitmix64 chain over (master, trial, 0, fnv1a64(tag)); tags 'channel' and 'init', shared by all sweep values and architectures";
    j["outputs"] = m.outputs;
    j["wall_time_s"] = m.wall_time;
    return j.dump(2) + "\n";
}

std::vector<double> beampattern_grid(double step_deg)
{
    if (!(step_deg > 0 && step_deg <= 180)) throw std::invalid_argument("beampattern_grid: step must lie in (0, 180]");
    const int n = static_cast<int>(std::floor(180.0 / step_deg + 1e-9));
    std::vector<double> g;
    g.reserve(static_cast<size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) g.push_back((-90.0 + i * step_deg) * deg);
    return g;
}

void emit_beampattern(const BeamformerSet& bf, const std::vector<double>& grid, const SystemConfig& cfg,
                      const std::string& path)
{
    if (grid.empty()) throw std::invalid_argument("emit_beampattern: empty angle grid");
    const std::vector<double> P = beampattern(stack(bf.receive()), stack(bf.transmit()), grid, cfg);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("emit_beampattern: cannot open '" + path + "' for writing");
    out << "angle_deg,power_db\n";
    for (size_t i = 0; i < grid.size(); ++i) out << num(std::round(grid[i] / deg * 1e9) / 1e9) << ',' << num(P[i]) << '\n';
    if (!out) throw std::runtime_error("emit_beampattern: write failed for '" + path + "'");
}

}  // namespace rsdfrc
