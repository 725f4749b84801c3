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

#include <complex>
#include <string>
#include <vector>

#include <armadillo>

#include "ofdmsense/random.hpp"
#include "ofdmsense/scenario.hpp"

namespace ofdmsense {

// Spectrally interleaved resource occupancy. User 0 is the rUE; users
// i >= 1 are iUEs. Each user's resource set is the Cartesian product of
// its frequency and time sets.
struct ResourceAllocation {
    arma::uword num_subcarriers = 0; // N
    arma::uword num_symbols = 0;     // T
    arma::uvec rue_freq;             // sorted subcarrier indices, 0-based
    arma::uvec rue_time;             // sorted symbol indices, 0-based
    std::vector<arma::uvec> iue_freq;
    std::vector<arma::uvec> iue_time;

    arma::uword num_iue() const { return iue_freq.size(); }
    arma::uword rue_resource_count() const { return rue_freq.n_elem * rue_time.n_elem; } // M^(0)
    arma::uword user_resource_count(arma::uword user) const;                             // M^(i)

    bool rue_uses(arma::uword n, arma::uword t) const;
    bool iue_uses(arma::uword i, arma::uword n, arma::uword t) const; // i is iUE index (0-based)
    bool interfered(arma::uword n, arma::uword t) const;              // in any iUE set

    // Interference-free part of the rUE grid (set difference on subcarriers;
    // the paper's scenarios keep all users on every time slot).
    arma::uvec clean_freq() const;
    arma::uvec clean_time() const;
    arma::uword clean_count() const; // |Omega|

    void validate() const;
};

// Random spectrally interleaved allocation for one rUE and one iUE, both
// occupying every time slot. The iUE set overlaps the rUE set in exactly
// `n_overlap` subcarriers.
ResourceAllocation allocate_resources(arma::uword num_subcarriers, arma::uword num_symbols,
                                      arma::uword n_rue, arma::uword n_iue,
                                      arma::uword n_overlap, Rng& rng);

// Half-wavelength ULA response, unit Euclidean norm:
// a_k(theta) = N_u^{-1/2} exp(j pi sin(theta) k), k = 0..N_u-1.
arma::cx_vec steering_vector(double theta, arma::uword n_antennas);

// Steering vectors for a whole grid of angles, one column per angle.
arma::cx_mat steering_matrix(const arma::vec& thetas, arma::uword n_antennas);

// d_n(tau) = exp(-j 2 pi delta_f n tau), 0-based subcarrier index.
std::complex<double> delay_response(arma::uword subcarrier, double tau_s, double delta_f_hz);

// Per-user Gaussian transmit symbols on the allocated resources.
struct TransmitGrid {
    std::vector<arma::cx_cube> user_symbols; // per user: (N_u, N, T), zero off-support
    arma::vec symbol_variance;               // sigma_i^2 = E_i / (M^(0) N_u)
};

TransmitGrid synthesize_transmit(const ResourceAllocation& alloc,
                                 const std::vector<double>& tx_power_w,
                                 arma::uword n_antennas, Rng& rng);

// Complex baseband observations y_{n,t,k} at the rUE, stored antenna-first.
struct ReceivedTensor {
    arma::cx_cube samples; // (N_u, N, T); samples.slice(t).col(n) = y_{n,t}
    ResourceAllocation allocation;

    arma::uword num_antennas() const { return samples.n_rows; }
    arma::uword num_subcarriers() const { return samples.n_cols; }
    arma::uword num_symbols() const { return samples.n_slices; }
};

// Superimpose monostatic echoes, direct iUE paths, and iUE scatter paths,
// plus white noise of per-element variance `noise_power_w`.
ReceivedTensor synthesize_received(const ChannelParams& params, const TransmitGrid& tx,
                                   const ResourceAllocation& alloc, double noise_power_w,
                                   double delta_f_hz, Rng& rng);

// Debug dump of one realization: <prefix>.tensor.bin holds the tensor
// row-major in (n, t, k) order as interleaved real/imag float64;
// <prefix>.masks.csv the allocation sets; <prefix>.meta.json the shapes.
void dump_realization(const ReceivedTensor& tensor, const std::string& path_prefix);

} // namespace ofdmsense
