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

#include <string>
#include <vector>

#include <armadillo>

namespace ofdmsense {

// Scan grid for the angle axis: `points` samples, inset half a step from
// the open interval (lo, hi). A half-wavelength ULA is unambiguous only on
// (-pi/2, pi/2), which is the default sector.
struct AngleGrid {
    arma::uword points = 721;
    double lo = -M_PI / 2.0;
    double hi = M_PI / 2.0;
    arma::vec sample() const;
};

// Local zoom refinement: `rounds` passes of a `points`-sample grid whose
// half-width shrinks by `shrink` per round.
struct RefineConfig {
    arma::uword rounds = 2;
    arma::uword points = 41;
    double shrink = 20.0;
};

// MUSIC pseudo-spectrum with its selected peaks, strongest first.
struct AngleSpectrum {
    arma::vec grid;
    arma::vec pseudo;
    arma::vec peak_angles;
    arma::vec peak_values;
};

// Subspace angle estimation from array snapshots (one column per resource
// element). Throws estimation_error when fewer than `num_signals` local
// maxima exist.
AngleSpectrum music_estimate(const arma::cx_mat& snapshots, arma::uword num_signals,
                             const AngleGrid& grid = {}, const RefineConfig& refine = {});

struct DelayAnglePair {
    double delay_s = 0.0;
    double angle_rad = 0.0;
};

struct OmpConfig {
    AngleGrid angle_grid;
    arma::uword delay_points = 512;
    double delay_max_s = 0.0; // 0 -> 1 / (4 delta_f), one-way unambiguous span
    RefineConfig refine;      // per-iteration local refinement
    // Cyclic polish: after the greedy pass, each atom is re-refined against
    // the residual of the others until its parameters stop moving.
    arma::uword polish_zoom_rounds = 3;
    arma::uword max_polish_passes = 10;
    double polish_tol_delay_s = 5e-14;
    double polish_tol_angle_rad = 5e-7;
};

struct OmpResult {
    std::vector<DelayAnglePair> pairs;
    std::vector<double> residual_history; // residual norm after each greedy iteration
    double residual_norm = 0.0;           // after the final joint projection
    std::vector<std::string> warnings;
};

// Greedy sparse recovery of `num_targets` monostatic (delay, angle) pairs
// from snapshots restricted to the estimation resource set. Columns of
// `snapshots`/`tx_symbols` correspond one-to-one; `subcarrier_of_col`
// holds each column's 0-based subcarrier index. Atom delays use the
// round-trip convention d_n(2 tau), so returned delays are one-way.
OmpResult omp_estimate(const arma::cx_mat& snapshots, const arma::cx_mat& tx_symbols,
                       const arma::uvec& subcarrier_of_col, double delta_f_hz,
                       arma::uword num_targets, const OmpConfig& config = {});

// Squared circular distance used for data association and truth matching.
double circular_angle_cost(double a, double b);

// Wrapped signed difference a - b in (-pi, pi].
double circular_angle_error(double a, double b);

// Joint estimate set after associating OMP pairs with MUSIC peaks. Only
// the pair assigned to the strongest peak (the presumed interferer) has
// its angle replaced by the MUSIC estimate.
struct TargetEstimateSet {
    std::vector<DelayAnglePair> pairs; // OMP output, unchanged
    arma::vec updated_angles;          // theta_i after the association update
    arma::umat assignment;             // permutation matrix X, OMP row -> peak column
    arma::uword interferer_peak = 0;   // w = argmax peak value
    std::vector<std::string> warnings;
};
TargetEstimateSet associate(const OmpResult& omp, const AngleSpectrum& spectrum);

// Match estimated pairs to ground-truth targets by circular angle cost;
// returns per-estimate truth indices.
arma::uvec match_to_truth(const arma::vec& estimated_angles, const arma::vec& truth_angles);

// Per-target RMSE accumulation across Monte Carlo trials. Failed trials
// are counted separately and excluded from the averages.
class RmseAccumulator {
  public:
    explicit RmseAccumulator(arma::uword num_targets);

    void add(const std::vector<DelayAnglePair>& pairs, const arma::vec& updated_angles,
             const arma::vec& truth_delays, const arma::vec& truth_angles);
    void add_failure();

    arma::vec delay_rmse() const;
    arma::vec angle_rmse() const;
    // Approximate standard errors of the RMSE estimates.
    arma::vec delay_rmse_se() const;
    arma::vec angle_rmse_se() const;
    arma::uword trials() const { return trials_; }
    arma::uword failures() const { return failures_; }

  private:
    arma::vec se2_delay_, se4_delay_, se2_angle_, se4_angle_;
    arma::uword trials_ = 0;
    arma::uword failures_ = 0;
};

} // namespace ofdmsense
