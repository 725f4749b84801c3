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

#include <cstdint>
#include <string>
#include <vector>

#include <armadillo>

#include "ofdmsense/random.hpp"

namespace ofdmsense {

// Scenario geometry and radio constants. The reference UE (rUE) performs
// monostatic sensing from the origin; interfering UEs (iUE) and passive
// scatter points (SP) are the sensed objects.
struct ScenarioConfig {
    arma::vec2 rue_position{arma::fill::zeros};        // must be the origin
    std::vector<arma::vec2> iue_positions;             // O entries, meters
    std::vector<arma::vec2> sp_positions;              // L entries, meters
    double carrier_freq_hz = 0.0;
    double subcarrier_spacing_hz = 0.0;
    arma::uword num_subcarriers = 0;                   // N
    arma::uword num_symbols = 0;                       // T
    arma::uword num_antennas = 0;                      // N_u
    double noise_power_w = 0.0;                        // per resource element
    std::vector<double> tx_power_w;                    // E_0 ... E_O, watts
    std::uint64_t rng_seed = 0;

    arma::uword num_iue() const { return iue_positions.size(); }
    arma::uword num_sp() const { return sp_positions.size(); }
    arma::uword num_objects() const { return num_iue() + num_sp(); }

    // Position of object l in [0, O+L): iUEs first, then SPs.
    arma::vec2 object_position(arma::uword l) const;

    // Throws on violated invariants (origin rUE, positive powers/counts,
    // distinct positions).
    void validate() const;
};

// Load a ScenarioConfig from a JSON file whose keys match the field names.
ScenarioConfig load_scenario_config(const std::string& path);

// Canonical JSON serialization (used for config hashing and manifests).
std::string scenario_config_to_json(const ScenarioConfig& config);

// All deterministic channel quantities plus the per-realization random
// phases. Object index l runs over iUEs then SPs; iUE index i over iUEs.
struct ChannelParams {
    double wavelength_m = 0.0;
    arma::cx_vec mono_gains;   // alpha_{0,l}, round-trip rUE->object->rUE
    arma::cx_vec direct_gains; // alpha_i, iUE->rUE line of sight
    arma::cx_mat cross_gains;  // alpha_{i,l}, iUE i -> object l -> rUE (0 for l == i)
    arma::vec aoa;             // theta_l at the rUE
    arma::vec aod;             // phi_i at iUE i toward the rUE
    arma::mat aod_cross;       // phi_{i,l} at iUE i toward object l
    arma::vec toa;             // tau_l, one-way rUE->object
    arma::mat toa_cross;       // tau_{i,l} = tau_l + |p_l - p_i|/c
};

// Derive all channel parameters from the geometry; phases are drawn iid
// Uniform[0, 2pi) from `rng`, everything else is deterministic.
ChannelParams derive_channel_params(const ScenarioConfig& config, Rng& rng);

} // namespace ofdmsense
