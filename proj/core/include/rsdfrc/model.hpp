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

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace rsdfrc {

using cplx = std::complex<double>;
using cmat = Eigen::MatrixXcd;
using cvec = Eigen::VectorXcd;
using rmat = Eigen::MatrixXd;
using rvec = Eigen::VectorXd;

inline constexpr double pi = 3.14159265358979323846;

// Array sizes, RF chains, users and powers (linear units, watts).
struct SystemConfig {
    int M_T = 16;
    int M_R = 8;
    int N_RF_t = 4;
    int N_RF_r = 4;
    int K = 2;
    int M_U = 2;
    int d_s = 1;
    double P_T = 10.0;
    double sigma2_user = 1e-12;
    double sigma2_radar = 0.2;
    double wavelength = 1.0;
    double spacing = 0.5;

    int N_s() const { return K * d_s; }

    // Throws std::invalid_argument when a count or power is out of range.
    void validate() const;
};

struct PathLossModel {
    double alpha = 72.0;
    double beta = 2.92;
    double sigma_shadow = 8.7;
};

struct PathInfo {
    cplx gain;
    double aod;
    double aoa;
};

struct ChannelSet {
    std::vector<cmat> H;
    std::vector<std::vector<PathInfo>> paths;
    std::vector<int> L;
    std::vector<double> distance;
    std::vector<double> path_loss_db;
};

struct RadarScene {
    double theta_0 = 0.0;
    std::vector<double> theta_j = {-pi / 6.0, pi / 6.0};
    double sigma0_sq = 10.0;
    double sigmaC_sq = 100.0;

    void validate() const;
};

// ULA response with unit norm; entry m is exp(-j 2 pi d m sin(angle) / lambda) / sqrt(M).
cvec steering_vector(double angle, int num_antennas, const SystemConfig& cfg);

double path_loss_db(double distance, const PathLossModel& model, double shadowing);

// Each user draws from its own substream of `seed`, so adding users leaves earlier channels intact.
ChannelSet generate_channel(const SystemConfig& cfg, const PathLossModel& model,
                            const std::vector<double>& distances, const std::vector<int>& L,
                            std::uint64_t seed);

// Radar response A(theta) = a_r(theta) a_t(theta)^T (plain transpose).
cmat response_matrix(double theta, const SystemConfig& cfg);

// Deterministic 64-bit mixing used for all seed derivation in the library.
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

}  // namespace rsdfrc
