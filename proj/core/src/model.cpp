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

#include "rsdfrc/model.hpp"

#include <cmath>
#include <random>
#include <string>

namespace rsdfrc {

void SystemConfig::validate() const
{
    auto fail = [](const std::string& what) { throw std::invalid_argument("SystemConfig: " + what); };
    if (M_T < 1 || M_R < 1 || N_RF_t < 1 || N_RF_r < 1 || K < 1 || M_U < 1 || d_s < 1)
        fail("all counts must be at least 1");
    if (N_s() > N_RF_t) fail("N_s must not exceed N_RF_t");
    if (N_RF_t > M_T) fail("N_RF_t must not exceed M_T");
    if (N_RF_r > M_R) fail("N_RF_r must not exceed M_R");
    if (d_s > M_U) fail("d_s must not exceed M_U");
    if (!(P_T > 0) || !(sigma2_user > 0) || !(sigma2_radar > 0) || !(wavelength > 0) || !(spacing > 0))
        fail("powers, wavelength and spacing must be positive");
}

void RadarScene::validate() const
{
    auto in_range = [](double a) { return a > -pi / 2 && a < pi / 2; };
    if (!(sigma0_sq > 0)) throw std::invalid_argument("RadarScene: sigma0_sq must be positive");
    if (!(sigmaC_sq >= 0)) throw std::invalid_argument("RadarScene: sigmaC_sq must be nonnegative");
    if (!in_range(theta_0)) throw std::invalid_argument("RadarScene: target angle outside (-pi/2, pi/2)");
    for (double t : theta_j)
        if (!in_range(t)) throw std::invalid_argument("RadarScene: clutter angle outside (-pi/2, pi/2)");
}

cvec steering_vector(double angle, int num_antennas, const SystemConfig& cfg)
{
    if (num_antennas < 1) throw std::invalid_argument("steering_vector: num_antennas must be >= 1");
    const double k = 2.0 * pi * cfg.spacing / cfg.wavelength * std::sin(angle);
    const double scale = 1.0 / std::sqrt(static_cast<double>(num_antennas));
    cvec a(num_antennas);
    for (int m = 0; m < num_antennas; ++m)
        a(m) = std::polar(scale, -k * m);
    return a;
}

double path_loss_db(double distance, const PathLossModel& model, double shadowing)
{
    if (!(distance > 0)) throw std::domain_error("path_loss_db: distance must be positive");
    return model.alpha + 10.0 * model.beta * std::log10(distance) + shadowing;
}

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b)
{
    return splitmix64(splitmix64(a) ^ (b + 0x632be59bd9b4e019ULL));
}

ChannelSet generate_channel(const SystemConfig& cfg, const PathLossModel& model,
                            const std::vector<double>& distances, const std::vector<int>& L,
                            std::uint64_t seed)
{
    if (static_cast<int>(distances.size()) != cfg.K || static_cast<int>(L.size()) != cfg.K)
        throw std::invalid_argument("generate_channel: distances and path counts need one entry per user");

    ChannelSet ch;
    ch.H.reserve(cfg.K);
    ch.paths.resize(cfg.K);
    ch.L = L;
    ch.distance = distances;
    ch.path_loss_db.resize(cfg.K);

    for (int k = 0; k < cfg.K; ++k) {
        if (L[k] < 1) throw std::invalid_argument("generate_channel: each user needs at least one path");
        std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(k)));
        std::normal_distribution<double> normal(0.0, 1.0);
        std::uniform_real_distribution<double> angle(-pi / 2, pi / 2);

        const double pl = path_loss_db(distances[k], model, model.sigma_shadow * normal(rng));
        ch.path_loss_db[k] = pl;
        const double sd = std::sqrt(std::pow(10.0, -0.1 * pl) / 2.0);

        cmat H = cmat::Zero(cfg.M_U, cfg.M_T);
        for (int l = 0; l < L[k]; ++l) {
            PathInfo p;
            const double re = normal(rng);
            const double im = normal(rng);
            p.gain = cplx(sd * re, sd * im);
            p.aod = angle(rng);
            p.aoa = angle(rng);
            H += p.gain * steering_vector(p.aoa, cfg.M_U, cfg) * steering_vector(p.aod, cfg.M_T, cfg).adjoint();
            ch.paths[k].push_back(p);
        }
        H *= std::sqrt(static_cast<double>(cfg.M_T * cfg.M_U) / L[k]);
        ch.H.push_back(std::move(H));
    }
    return ch;
}

cmat response_matrix(double theta, const SystemConfig& cfg)
{
    return steering_vector(theta, cfg.M_R, cfg) * steering_vector(theta, cfg.M_T, cfg).transpose();
}

}  // namespace rsdfrc
