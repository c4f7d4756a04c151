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
#include <string>
#include <string_view>
#include <vector>

#include "rsdfrc/model.hpp"

namespace rsdfrc {

// T_D is N_RF_t x N_s; user k owns columns [k d_s, (k+1) d_s).
struct BeamformerSet {
    cmat T_RF;
    cmat T_D;
    std::vector<cmat> U;
    cmat W_RF;
    cmat W_D;
    std::vector<cmat> T_aux;
    cmat W_aux;

    cmat T_D_block(int k, int d_s) const { return T_D.middleCols(k * d_s, d_s); }
    cmat transmit() const { return T_RF * T_D; }
    cmat receive() const { return W_RF * W_D; }
};

struct PowerModel {
    double P_BB = 0.2;
    double P_RF = 0.3;
    double P_PS = 0.05;
    double P_SW = 0.005;
};

enum class Architecture { RS, PC, DPC, FC, FD };

Architecture parse_architecture(std::string_view tag);
std::string to_string(Architecture arch);

// Splits an M_T x N_s transmit matrix into K blocks of width d_s, and back.
std::vector<cmat> split_users(const cmat& X, int K, int d_s);
cmat join_users(const std::vector<cmat>& T);

// Column-major stacking vec(X), matching the I (x) A(theta) convention.
cvec stack(const cmat& X);

// Sum-rate in bits/s/Hz with the user combiners held in bf.U.
double sum_rate(const ChannelSet& ch, const BeamformerSet& bf, const SystemConfig& cfg);

// Same rate with per-user transmit blocks and combiners given explicitly.
double sum_rate(const ChannelSet& ch, const std::vector<cmat>& T, const std::vector<cmat>& U,
                const SystemConfig& cfg);

// Rate with MMSE combiners, which equals sum log2 det(I + S^H C^-1 S) per user.
double achievable_rate(const ChannelSet& ch, const std::vector<cmat>& T, const SystemConfig& cfg);

cmat mse_matrix(int k, const ChannelSet& ch, const std::vector<cmat>& T, const std::vector<cmat>& U,
                const SystemConfig& cfg);

// E_k from T_RF T_D,k when use_aux is false, from the auxiliary T_k otherwise.
cmat mse_matrix(int k, const ChannelSet& ch, const BeamformerSet& bf, const SystemConfig& cfg,
                bool use_aux = false);

// Sigma_cn of the trace form: clutter echoes driven by X plus radar noise, M_R x M_R.
cmat clutter_covariance(const cmat& X, const RadarScene& scene, const SystemConfig& cfg);

// SCNR in the trace form, X = T_RF T_D (M_T x N_s), W = W_RF W_D (M_R x N_s).
double scnr_full(const cmat& X, const cmat& W, const RadarScene& scene, const SystemConfig& cfg);
double scnr_full(const BeamformerSet& bf, const RadarScene& scene, const SystemConfig& cfg);

// SCNR in the stacked form with t = vec(X) and w = vec(W).
double scnr_vectorized(const cvec& t, const cvec& w, const RadarScene& scene, const SystemConfig& cfg);

// Largest trace-form SCNR reachable by any receiver for transmit matrix X.
double max_scnr(const cmat& X, const RadarScene& scene, const SystemConfig& cfg);

// P(theta) = |w^H (I (x) A(theta)) t|^2 in dB, shifted so the grid maximum is 0 dB.
std::vector<double> beampattern(const cvec& w, const cvec& t, const std::vector<double>& theta_grid,
                                const SystemConfig& cfg);

// First-order Marcum Q function, accurate to about 1e-13 relative for the tail that is returned.
double marcum_q1(double a, double b);

// P_D = Q_1(sqrt(2 scnr), sqrt(-2 ln p_fa)) for a nonfluctuating target in noise.
double detection_probability(double scnr, double p_fa);

double total_power(Architecture arch, const SystemConfig& cfg, const PowerModel& pm);
double energy_efficiency(double rate, Architecture arch, const SystemConfig& cfg, const PowerModel& pm);

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }
inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

}  // namespace rsdfrc
