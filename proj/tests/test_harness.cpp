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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "support.hpp"

#include "rsdfrc/harness.hpp"

using namespace rsdfrc;
using namespace rsdfrc::test;

namespace {

const char* small_spec = R"(
experiment:
  sweep: gamma_db
  values: [6, 8]
  architectures: [RS, FD]
  trials: 2
  seed: 3
system:
  M_T: 8
  M_R: 4
  N_RF_t: 2
  N_RF_r: 2
)";

std::string csv(const ResultsTable& t, const ExperimentSpec& s)
{
    std::ostringstream o;
    write_results_csv(t, s, o);
    return o.str();
}

std::vector<std::string> lines(const std::string& s)
{
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

}  // namespace

TEST_CASE("spec parsing converts units once")
{
    const ExperimentSpec s = parse_spec(R"(
experiment:
  gamma_db: 13
system:
  P_T_dbm: 30
  sigma2_user_dbm: -80
scene:
  theta0_deg: 10
  clutter_deg: [-45]
  sigma0_sq_db: 0
  sigmaC_sq_db: 30
)");
    CHECK(s.gamma == doctest::Approx(std::pow(10.0, 1.3)));
    CHECK(s.system.P_T == doctest::Approx(1.0));
    CHECK(s.system.sigma2_user == doctest::Approx(1e-11));
    CHECK(s.scene.theta_0 == doctest::Approx(10 * pi / 180));
    REQUIRE(s.scene.theta_j.size() == 1);
    CHECK(s.scene.theta_j[0] == doctest::Approx(-pi / 4));
    CHECK(s.scene.sigma0_sq == doctest::Approx(1.0));
    CHECK(s.scene.sigmaC_sq == doctest::Approx(1000.0));
}

TEST_CASE("defaults")
{
    const ExperimentSpec s = parse_spec("");
    CHECK(s.trials == 50);
    CHECK(s.system.M_T == 16);
    CHECK(s.gamma == doctest::Approx(10.0));
    CHECK(s.distance_m == 80.0);
    const ExperimentSpec from_schema = parse_spec(spec_schema());
    CHECK(from_schema.system.P_T == doctest::Approx(10.0));
    CHECK(from_schema.system.sigma2_user == doctest::Approx(1e-12));
    CHECK(from_schema.scene.sigmaC_sq == doctest::Approx(100.0));
    CHECK(from_schema.beampattern.gamma_db == 18.0);
}

TEST_CASE("spec errors")
{
    CHECK_THROWS_AS(parse_spec("experiment:\n  trails: 3\n"), ConfigError);
    CHECK_THROWS_AS(parse_spec("unknown_section: {}\n"), ConfigError);
    CHECK_THROWS_AS(parse_spec("experiment:\n  trials: 0\n"), ConfigError);
    CHECK_THROWS_AS(parse_spec("experiment:\n  values: []\n"), ConfigError);
    CHECK_THROWS_AS(parse_spec("experiment:\n  trials: many\n"), ConfigError);
    CHECK_THROWS_AS(parse_spec("experiment:\n  architectures: [XX]\n"), ConfigError);
    CHECK_THROWS_AS(parse_spec("experiment:\n  architectures: [FC]\n"), ConfigError);
    CHECK_THROWS_AS(parse_spec("experiment:\n  sweep: bandwidth\n"), ConfigError);
    CHECK_THROWS_AS(parse_spec("experiment:\n  sweep: K\n  values: [1.5]\n"), ConfigError);
    CHECK_THROWS_AS(parse_spec("experiment:\n  p_fa: [2]\n"), ConfigError);
    CHECK_THROWS_AS(parse_spec("system:\n  M_T: 10\nexperiment:\n  architectures: [PC]\n"), ConfigError);
    CHECK_THROWS_AS(parse_spec("scene:\n  theta0_deg: 95\n"), ConfigError);
    CHECK_THROWS_AS(parse_spec("experiment: [1, 2]\n"), ConfigError);
    CHECK_THROWS_AS(parse_spec("experiment:\n  values: [1\n"), ConfigError);
    CHECK_THROWS_AS(load_spec("/nonexistent/spec.yaml"), ConfigError);
}

TEST_CASE("seed derivation")
{
    CHECK(derive_seed(1, 0, 0, "RS") == derive_seed(1, 0, 0, "RS"));
    CHECK(derive_seed(1, 0, 0, "RS") != derive_seed(1, 0, 0, "PC"));
    CHECK(derive_seed(1, 0, 0, "RS") != derive_seed(1, 1, 0, "RS"));
    CHECK(derive_seed(1, 0, 0, "RS") != derive_seed(1, 0, 1, "RS"));
    CHECK(derive_seed(1, 0, 0, "RS") != derive_seed(2, 0, 0, "RS"));
    CHECK(derive_seed(1, 1, 0, "RS") != derive_seed(1, 0, 1, "RS"));
    ExperimentSpec spec = parse_spec("");
    CHECK(trial_seed(spec, 4, "channel") == derive_seed(spec.seed, 4, 0, "channel"));
    CHECK(trial_seed(spec, 4, "channel") != trial_seed(spec, 4, "init"));
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("sweep cells")
{
    ExperimentSpec s = parse_spec(small_spec);
    CHECK(sweep_cell(s, 1).gamma == doctest::Approx(db_to_linear(8)));
    s.sweep = SweepVariable::P_T_dbm;
    s.values = {30};
    CHECK(sweep_cell(s, 0).cfg.P_T == doctest::Approx(1.0));
    s.sweep = SweepVariable::K;
    s.values = {1};
    CHECK(sweep_cell(s, 0).cfg.K == 1);
    s.sweep = SweepVariable::M_T;
    s.values = {12};
    CHECK(sweep_cell(s, 0).cfg.M_T == 12);
}

TEST_CASE("every sweep value of a trial uses the same channel")
{
    ExperimentSpec s = parse_spec(small_spec);
    const SweepCell a = sweep_cell(s, 0), b = sweep_cell(s, 1);
    const ChannelSet x = trial_channel(s, a.cfg, 1), y = trial_channel(s, b.cfg, 1);
    for (int k = 0; k < a.cfg.K; ++k) CHECK(x.H[k] == y.H[k]);
    CHECK(trial_channel(s, a.cfg, 0).H[0] != x.H[0]);
}

TEST_CASE("single trial run gives one deterministic row")
{
    ExperimentSpec s = parse_spec(small_spec);
    s.values = {6};
    s.archs = {Architecture::RS};
    s.trials = 1;
    const ResultsTable a = run_experiment(s);
    const ResultsTable b = run_experiment(s);
    REQUIRE(a.rows.size() == 1);
    CHECK(lines(csv(a, s)).size() == 2);
    CHECK(csv(a, s) == csv(b, s));
    const TrialRecord& r = a.rows[0];
    CHECK(r.status == SolveStatus::converged);
    CHECK(r.scnr >= db_to_linear(6) * (1 - 1e-4));
    CHECK(r.pd.size() == 2);
    CHECK(r.pd[1] >= r.pd[0]);
    CHECK(r.ee == doctest::Approx(energy_efficiency(r.sum_rate, Architecture::RS, s.system, s.power)));
}

TEST_CASE("results are independent of thread count and architecture order")
{
    ExperimentSpec s = parse_spec(small_spec);
    const ResultsTable one = run_experiment(s, 1);
    const ResultsTable three = run_experiment(s, 3);
    CHECK(csv(one, s) == csv(three, s));

    ExperimentSpec swapped = s;
    swapped.archs = {Architecture::FD, Architecture::RS};
    const ResultsTable sw = run_experiment(swapped, 2);
    for (const auto& r : one.rows) {
        bool found = false;
        for (const auto& q : sw.rows)
            if (q.arch == r.arch && q.trial == r.trial && q.sweep_index == r.sweep_index) {
                found = true;
                CHECK(q.sum_rate == r.sum_rate);
                CHECK(q.scnr == r.scnr);
                CHECK(q.seed == r.seed);
            }
        CHECK(found);
    }

    // ordering: sweep, architecture, trial
    for (size_t i = 1; i < one.rows.size(); ++i) {
        const auto& p = one.rows[i - 1];
        const auto& q = one.rows[i];
        CHECK(std::make_tuple(p.sweep_index, p.arch == Architecture::FD, p.trial) <
              std::make_tuple(q.sweep_index, q.arch == Architecture::FD, q.trial));
    }

    const auto l = lines(csv(one, s));
    CHECK(l.size() == one.rows.size() + 1);
    CHECK(l[0].rfind("schema_version,", 0) == 0);
    CHECK(l[0].find("pd_1e-06") != std::string::npos);
    CHECK(l[1].rfind("1,gamma_db,6,RS,0,", 0) == 0);

    std::ostringstream sum;
    write_summary_csv(one, s, sum);
    const auto sl = lines(sum.str());
    CHECK(sl.size() == 1 + 2 * 2);
    double mean = 0;
    for (const auto& r : one.rows)
        if (r.sweep_index == 0 && r.arch == Architecture::RS) mean += r.sum_rate / 2;
    std::vector<std::string> fields;
    std::istringstream row(sl[1]);
    for (std::string f; std::getline(row, f, ',');) fields.push_back(f);
    REQUIRE(fields.size() > 7);
    CHECK(fields[3] == "RS");
    CHECK(fields[4] == "2");
    CHECK(std::stod(fields[6]) == doctest::Approx(mean).epsilon(1e-12));
}

TEST_CASE("infeasible trials are recorded and the run continues")
{
    ExperimentSpec s = parse_spec(small_spec);
    s.values = {6, 40};
    s.archs = {Architecture::RS};
    s.trials = 1;
    const ResultsTable t = run_experiment(s);
    REQUIRE(t.rows.size() == 2);
    CHECK_FALSE(t.rows[0].infeasible());
    CHECK(t.rows[1].infeasible());
    CHECK(t.any_infeasible());
    const auto l = lines(csv(t, s));
    CHECK(l[2].find(",infeasible,1,") != std::string::npos);
}

TEST_CASE("manifest")
{
    ExperimentSpec s = parse_spec(small_spec);
    RunManifest m;
    m.config_path = "x.yaml";
    m.config_hash = 0xabcULL;
    m.seed = 3;
    m.trials = 2;
    const std::string j = manifest_json(m, s);
    CHECK(j.find("\"config_fnv1a64\": \"0000000000000abc\"") != std::string::npos);
    CHECK(j.find("\"master_seed\": 3") != std::string::npos);
    CHECK(j.find("\"code_version\"") != std::string::npos);
}

TEST_CASE("beampattern file")
{
    const auto grid = beampattern_grid(0.5);
    CHECK(grid.size() == 361);
    CHECK(grid.front() == doctest::Approx(-pi / 2));
    CHECK(grid.back() == doctest::Approx(pi / 2));
    CHECK(grid[180] == doctest::Approx(0.0));

    SystemConfig c;
    c.K = 1;
    BeamformerSet bf;
    bf.T_RF = cmat::Identity(16, 16);
    bf.T_D = steering_vector(0.0, 16, c).conjugate();
    bf.W_RF = cmat::Identity(8, 8);
    bf.W_D = steering_vector(0.0, 8, c);
    const auto path = (std::filesystem::temp_directory_path() / "rsdfrc_bp_test.csv").string();
    emit_beampattern(bf, grid, c, path);
    std::ifstream in(path);
    std::string header, row;
    std::getline(in, header);
    CHECK(header == "angle_deg,power_db");
    int n = 0;
    std::string peak_row;
    while (std::getline(in, row)) {
        ++n;
        if (row.substr(row.find(',') + 1) == "0") peak_row = row;
    }
    CHECK(n == 361);
    CHECK(peak_row == "0,0");
    std::filesystem::remove(path);

    CHECK_THROWS_AS(emit_beampattern(bf, {}, c, path), std::invalid_argument);
    CHECK_THROWS_AS(emit_beampattern(bf, grid, c, "/nonexistent/dir/bp.csv"), std::runtime_error);
}
