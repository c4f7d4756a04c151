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

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "rsdfrc/model.hpp"

namespace rsdfrc::test {

inline cmat randn(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c, double scale = 1.0)
{
    std::normal_distribution<double> n(0.0, scale / std::sqrt(2.0));
    cmat M(r, c);
    for (Eigen::Index j = 0; j < c; ++j)
        for (Eigen::Index i = 0; i < r; ++i) M(i, j) = cplx(n(rng), n(rng));
    return M;
}

inline cvec randv(std::mt19937_64& rng, Eigen::Index n, double scale = 1.0)
{
    return randn(rng, n, 1, scale);
}

// Direct evaluation of the ULA response, written independently of the library.
inline cvec ula(double angle, int M, double spacing = 0.5, double wavelength = 1.0)
{
    cvec a(M);
    for (int m = 0; m < M; ++m) {
        const double ph = -2.0 * pi * spacing * m * std::sin(angle) / wavelength;
        a(m) = cplx(std::cos(ph), std::sin(ph)) / std::sqrt(static_cast<double>(M));
    }
    return a;
}

// Small system with a well-conditioned noise level, for oracle comparisons.
inline SystemConfig small_config(int M_T, int M_R, int N_t, int N_r, int K, int M_U, int d_s)
{
    SystemConfig c;
    c.M_T = M_T;
    c.M_R = M_R;
    c.N_RF_t = N_t;
    c.N_RF_r = N_r;
    c.K = K;
    c.M_U = M_U;
    c.d_s = d_s;
    c.P_T = 1.0;
    c.sigma2_user = 0.1;
    c.sigma2_radar = 0.2;
    return c;
}

// Unit-variance random channels with the right shapes.
inline ChannelSet random_channels(std::mt19937_64& rng, const SystemConfig& c)
{
    ChannelSet ch;
    for (int k = 0; k < c.K; ++k) ch.H.push_back(randn(rng, c.M_U, c.M_T));
    return ch;
}

inline double rel_err(double a, double b)
{
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

}  // namespace rsdfrc::test
