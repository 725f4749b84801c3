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

#include <armadillo>

#include "ofdmsense/random.hpp"
#include "ofdmsense/waveform.hpp"

namespace ofdmsense {

// Parameters of one order-statistics detection family (subcarriers or
// time slots): powers are thresholded against beta times the kappa-th
// smallest of n_stats compared statistics, each approximately
// Gamma(shape, .) under the null.
struct DetectionConfig {
    arma::uword kappa = 1;
    double beta = 1.0;
    double delta = 0.01;     // target familywise error rate for calibration
    arma::uword shape = 0;   // Gamma shape rho of each power statistic
    arma::uword n_stats = 0; // number of compared statistics
    void validate() const;
};

// Power statistics, one value per tested index.
struct PowerStats {
    arma::uvec index; // subcarrier or slot indices, ascending
    arma::vec power;
};

// gamma_n = sum over used slots and antennas of |y_{n,t,k}|^2, for each
// rUE subcarrier n.
PowerStats subcarrier_powers(const ReceivedTensor& y, const ResourceAllocation& alloc);

// Same statistic with the roles of subcarriers and slots swapped.
PowerStats slot_powers(const ReceivedTensor& y, const ResourceAllocation& alloc);

// Indices whose power strictly exceeds (kappa-th smallest power) * beta.
arma::uvec threshold_detect(const PowerStats& powers, arma::uword kappa, double beta);

// Estimated interference-free rUE resources after removing every detected
// subcarrier row and detected slot column from the rUE grid.
struct CleanSet {
    arma::uvec freq;
    arma::uvec time;
    arma::uword count() const { return freq.n_elem * time.n_elem; }
};
CleanSet estimate_clean_set(const ResourceAllocation& alloc, const arma::uvec& freq_detected,
                            const arma::uvec& time_detected);

// Familywise error rate P(gamma_(n) > gamma_(1) * beta) for n iid
// Gamma(shape, .) statistics, evaluated at unit scale (the probability is
// scale-free). Computed by adaptive quadrature of the order-statistics
// density with incomplete-gamma kernels.
double fwer_theoretical(double beta, arma::uword shape, arma::uword n);

// Smallest beta (within `tol`) whose theoretical FWER is <= delta.
double calibrate_beta(double delta, arma::uword shape, arma::uword n, double tol = 1e-3);

// Diagnostic p-value of an observed ratio z = gamma_i / gamma_(1) >= 1.
double p_value(double z, arma::uword shape, arma::uword n);

// Monte Carlo estimate of P(gamma_(n) > gamma_(1) * beta) from `trials`
// draws of n iid Gamma(shape, scale) variables. Returns {estimate, se}.
struct MonteCarloEstimate {
    double value;
    double std_error;
};
MonteCarloEstimate fwer_monte_carlo(double beta, arma::uword shape, arma::uword n,
                                    arma::uword trials, double scale, Rng& rng);

// Full detection pass: both families thresholded, clean set estimated.
struct DetectionResult {
    arma::uvec detected_freq;
    arma::uvec detected_time;
    arma::uvec clean_freq;
    arma::uvec clean_time;
    PowerStats freq_stats;
    PowerStats time_stats;
};
DetectionResult detect_interference(const ReceivedTensor& y, const ResourceAllocation& alloc,
                                    const DetectionConfig& freq_cfg,
                                    const DetectionConfig& time_cfg);

} // namespace ofdmsense
