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

#include "ofdmsense/scenario.hpp"
#include "ofdmsense/waveform.hpp"

namespace ofdmsense {

// Estimation parameter vector of the Gaussian observation model. The flat
// real layout is [delays, angles, Re of all gains, Im of all gains] with
// gains ordered monostatic (O+L), direct (O), cross (row-major, skipping
// l == i). Departure angles and the scatter-path delay offsets are known
// constants, not parameters.
struct ParamVector {
    arma::vec delays; // tau_l
    arma::vec angles; // theta_l
    arma::cx_vec mono_gains;
    arma::cx_vec direct_gains;
    arma::cx_mat cross_gains;

    arma::vec aod;              // phi_i (fixed)
    arma::mat aod_cross;        // phi_{i,l} (fixed)
    arma::mat toa_cross_offset; // tau_{i,l} - tau_l (fixed)

    static ParamVector from_channel(const ChannelParams& channel);

    arma::uword num_iue() const { return direct_gains.n_elem; }
    arma::uword num_objects() const { return delays.n_elem; }
    arma::uword num_gains() const;
    arma::uword dim() const { return 2 * num_objects() + 2 * num_gains(); }

    arma::vec flatten() const;
    void assign_flat(const arma::vec& flat);
};

// Conditional mean of y_{n,t} given the rUE transmit symbols: the
// monostatic echo superposition.
arma::cx_vec mean_vector(arma::uword n, arma::uword t, const ParamVector& params,
                         const arma::cx_cube& rue_symbols, double delta_f_hz);

// Covariance of y_{n,t}: noise plus, on interfered resources, the
// marginalized interference with all cross terms.
arma::cx_mat covariance_matrix(arma::uword n, arma::uword t, const ParamVector& params,
                               const ResourceAllocation& alloc, const arma::vec& symbol_variance,
                               double noise_power_w, arma::uword n_antennas, double delta_f_hz);

// Finite-difference steps for the covariance derivatives.
struct FimSteps {
    double delay_s = 1e-12;
    double angle_rad = 1e-7;
    double gain = 1e-9;
};

// Fisher information accumulated over the resource set (columns of
// `resources` are (n, t) pairs), Slepian-Bangs form. Mean derivatives are
// analytic; covariance derivatives use central finite differences.
arma::mat fim(const ParamVector& params, const arma::umat& resources,
              const arma::cx_cube& rue_symbols, const ResourceAllocation& alloc,
              const arma::vec& symbol_variance, double noise_power_w, double delta_f_hz,
              const FimSteps& steps = {});

// Bounds extracted from the information matrix. Directions with (numerically)
// zero information are excluded through a scaled pseudo-inverse; they can
// only involve nuisance gains, and an error is raised if an interest
// direction would be lost.
struct CrlbReport {
    arma::mat fim;       // input information matrix
    arma::mat crlb;      // pseudo-inverse on the identifiable subspace
    arma::vec deb;       // per-object delay error bound, seconds
    arma::vec aeb;       // per-object angle error bound, radians
    double condition = 0.0;
};
CrlbReport bounds(const arma::mat& fisher, arma::uword num_iue, arma::uword num_sp);

// Convenience: resource-set matrices for the full rUE grid and for the
// interference-free part.
arma::umat rue_resources(const ResourceAllocation& alloc);
arma::umat clean_resources(const ResourceAllocation& alloc);

} // namespace ofdmsense
