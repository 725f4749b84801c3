// SPDX-License-Identifier: Apache-2.0
//
// ofdmsense - multi-user OFDM radar sensing with interference detection
// Copyright (C) 2026 the ofdmsense contributors
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

#include <armadillo>
#include <boost/math/special_functions/gamma.hpp>

#include "ofdmsense/scenario.hpp"

namespace testsupport {

// Two-user reference scenario (matches configs/default_scenario.json).
inline ofdmsense::ScenarioConfig make_scenario(double e0 = 0.05, double e1 = 0.05)
{
    ofdmsense::ScenarioConfig sc;
    sc.iue_positions = {arma::vec2{5.0, 14.0}};
    sc.sp_positions = {arma::vec2{17.0, 6.0}};
    sc.carrier_freq_hz = 15e9;
    sc.subcarrier_spacing_hz = 250e3;
    sc.num_subcarriers = 64;
    sc.num_symbols = 30;
    sc.num_antennas = 6;
    sc.noise_power_w = std::pow(10.0, (-173.85 - 30.0) / 10.0);
    sc.tx_power_w = {e0, e1};
    sc.rng_seed = 1;
    return sc;
}

// Kolmogorov-Smirnov distance of samples against Gamma(shape, scale).
inline double ks_distance_gamma(arma::vec samples, double shape, double scale)
{
    samples = arma::sort(samples);
    const double n = static_cast<double>(samples.n_elem);
    double d = 0.0;
    for (arma::uword i = 0; i < samples.n_elem; ++i) {
        const double f = boost::math::gamma_p(shape, samples(i) / scale);
        d = std::max(d, std::max(f - static_cast<double>(i) / n,
                                 static_cast<double>(i + 1) / n - f));
    }
    return d;
}

} // namespace testsupport
