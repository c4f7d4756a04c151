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

#include "rsdfrc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace rsdfrc {

namespace {

double log_poisson(double mean, long k)
{
    if (mean == 0.0) return k == 0 ? 0.0 : -INFINITY;
    return -mean + k * std::log(mean) - std::lgamma(static_cast<double>(k) + 1.0);
}

// Index window holding all but ~1e-300 of a Poisson(mean) mass.
long poisson_upper(double mean)
{
    return static_cast<long>(std::ceil(mean + 40.0 * std::sqrt(mean) + 60.0));
}

}  // namespace

// Q_1(a, b) = P(J <= K) with K ~ Poisson(a^2/2) and J ~ Poisson(b^2/2) independent.
// Both P(J <= K) and P(J > K) are summed term by term, and the smaller one is returned
// directly (or as its complement), so neither tail suffers cancellation.
double marcum_q1(double a, double b)
{
    if (!(a >= 0.0) || !(b >= 0.0)) throw std::domain_error("marcum_q1: arguments must be nonnegative");
    const double x = 0.5 * a * a;
    const double y = 0.5 * b * b;
    if (y == 0.0) return 1.0;

    const long kmax = poisson_upper(x);
    const long n = std::max(kmax, poisson_upper(y)) + 1;

    // Poisson(y) pmf on [0, n]; cdf from below and survival from above.
    std::vector<double> pmf(n + 1), cdf(n + 1), sf(n + 1);
    for (long i = 0; i <= n; ++i) pmf[i] = std::exp(log_poisson(y, i));
    double acc = 0.0;
    for (long i = 0; i <= n; ++i) {
        acc += pmf[i];
        cdf[i] = acc;
    }
    acc = 0.0;
    for (long i = n; i >= 0; --i) {
        sf[i] = acc;  // P(J > i)
        acc += pmf[i];
    }

    double q = 0.0, p = 0.0;
    for (long k = 0; k <= kmax; ++k) {
        const double w = std::exp(log_poisson(x, k));
        if (w == 0.0) continue;
        q += w * cdf[k];
        p += w * sf[k];
    }
    return q <= p ? q : 1.0 - p;
}

}  // namespace rsdfrc
