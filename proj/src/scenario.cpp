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

#include "ofdmsense/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ofdmsense/common.hpp"

namespace ofdmsense {

arma::vec2 ScenarioConfig::object_position(arma::uword l) const
{
    if (l < num_iue())
        return iue_positions[l];
    return sp_positions[l - num_iue()];
}

void ScenarioConfig::validate() const
{
    if (arma::norm(rue_position) != 0.0)
        throw geometry_error("rue_position must be the origin");
    if (iue_positions.empty())
        throw std::invalid_argument("at least one iUE is required");
    if (carrier_freq_hz <= 0.0 || subcarrier_spacing_hz <= 0.0)
        throw std::invalid_argument("carrier frequency and subcarrier spacing must be positive");
    if (num_subcarriers < 1 || num_symbols < 1)
        throw std::invalid_argument("subcarrier and symbol counts must be >= 1");
    if (num_antennas < 2)
        throw std::invalid_argument("num_antennas must be >= 2");
    if (noise_power_w <= 0.0)
        throw std::invalid_argument("noise_power_w must be positive");
    if (tx_power_w.size() != num_iue() + 1)
        throw std::invalid_argument("tx_power_w must have one entry per UE (rUE first)");
    for (double p : tx_power_w)
        if (p < 0.0)
            throw std::invalid_argument("transmit powers must be nonnegative");

    // Path-gain formulas require strictly positive pairwise distances.
    const arma::uword n_obj = num_objects();
    for (arma::uword l = 0; l < n_obj; ++l) {
        if (arma::norm(object_position(l)) <= 0.0)
            throw geometry_error("object coincides with the rUE");
        for (arma::uword j = l + 1; j < n_obj; ++j)
            if (arma::norm(object_position(l) - object_position(j)) <= 0.0)
                throw geometry_error("two scene positions coincide");
    }
}

namespace {

arma::vec2 parse_vec2(const nlohmann::json& j)
{
    if (!j.is_array() || j.size() != 2)
        throw std::invalid_argument("expected a 2-element position [x, y]");
    return {j[0].get<double>(), j[1].get<double>()};
}

} // namespace

ScenarioConfig load_scenario_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open config file: " + path);
    nlohmann::json j = nlohmann::json::parse(in);

    ScenarioConfig c;
    c.rue_position = parse_vec2(j.at("rue_position"));
    for (const auto& p : j.at("iue_positions"))
        c.iue_positions.push_back(parse_vec2(p));
    for (const auto& p : j.at("sp_positions"))
        c.sp_positions.push_back(parse_vec2(p));
    c.carrier_freq_hz = j.at("carrier_freq_hz").get<double>();
    c.subcarrier_spacing_hz = j.at("subcarrier_spacing_hz").get<double>();
    c.num_subcarriers = j.at("num_subcarriers").get<arma::uword>();
    c.num_symbols = j.at("num_symbols").get<arma::uword>();
    c.num_antennas = j.at("num_antennas").get<arma::uword>();
    c.noise_power_w = j.at("noise_power_w").get<double>();
    c.tx_power_w = j.at("tx_power_w").get<std::vector<double>>();
    c.rng_seed = j.at("rng_seed").get<std::uint64_t>();
    c.validate();
    return c;
}

std::string scenario_config_to_json(const ScenarioConfig& c)
{
    nlohmann::json j;
    j["rue_position"] = {c.rue_position(0), c.rue_position(1)};
    j["iue_positions"] = nlohmann::json::array();
    for (const auto& p : c.iue_positions)
        j["iue_positions"].push_back({p(0), p(1)});
    j["sp_positions"] = nlohmann::json::array();
    for (const auto& p : c.sp_positions)
        j["sp_positions"].push_back({p(0), p(1)});
    j["carrier_freq_hz"] = c.carrier_freq_hz;
    j["subcarrier_spacing_hz"] = c.subcarrier_spacing_hz;
    j["num_subcarriers"] = c.num_subcarriers;
    j["num_symbols"] = c.num_symbols;
    j["num_antennas"] = c.num_antennas;
    j["noise_power_w"] = c.noise_power_w;
    j["tx_power_w"] = c.tx_power_w;
    j["rng_seed"] = c.rng_seed;
    return j.dump(2);
}

ChannelParams derive_channel_params(const ScenarioConfig& config, Rng& rng)
{
    config.validate();

    const arma::uword n_iue = config.num_iue();
    const arma::uword n_obj = config.num_objects();
    const double lambda = speed_of_light_mps / config.carrier_freq_hz;
    const double four_pi = 4.0 * M_PI;

    ChannelParams p;
    p.wavelength_m = lambda;
    p.mono_gains.set_size(n_obj);
    p.direct_gains.set_size(n_iue);
    p.cross_gains.zeros(n_iue, n_obj);
    p.aoa.set_size(n_obj);
    p.aod.set_size(n_iue);
    p.aod_cross.zeros(n_iue, n_obj);
    p.toa.set_size(n_obj);
    p.toa_cross.zeros(n_iue, n_obj);

    for (arma::uword l = 0; l < n_obj; ++l) {
        const arma::vec2 pos = config.object_position(l);
        const double range = arma::norm(pos);
        p.aoa(l) = wrap_angle(std::atan2(pos(1), pos(0)));
        p.toa(l) = range / speed_of_light_mps;
        // Monostatic round trip through object l: the scatter-path magnitude
        // evaluated at transmitter position p_0 = 0, i.e. the two-way law.
        const double mono_mag =
            lambda / (four_pi * std::sqrt(four_pi)) / (range * range);
        p.mono_gains(l) = std::polar(mono_mag, rng.uniform(0.0, 2.0 * M_PI));
    }

    for (arma::uword i = 0; i < n_iue; ++i) {
        const arma::vec2 pos = config.iue_positions[i];
        const double range = arma::norm(pos);
        const double theta = p.aoa(i);
        p.aod(i) = wrap_angle(theta >= 0.0 ? theta - M_PI : theta + M_PI);
        const double direct_mag = lambda / (four_pi * range);
        p.direct_gains(i) = std::polar(direct_mag, rng.uniform(0.0, 2.0 * M_PI));

        for (arma::uword l = 0; l < n_obj; ++l) {
            if (l == i)
                continue;
            const arma::vec2 obj = config.object_position(l);
            const arma::vec2 d = obj - pos;
            const double hop = arma::norm(d);
            if (hop <= 0.0)
                throw geometry_error("iUE coincides with a scatter object");
            const double cross_mag =
                lambda / (four_pi * std::sqrt(four_pi)) / (hop * arma::norm(obj));
            p.cross_gains(i, l) = std::polar(cross_mag, rng.uniform(0.0, 2.0 * M_PI));
            p.aod_cross(i, l) = wrap_angle(std::atan2(d(1), d(0)));
            p.toa_cross(i, l) = p.toa(l) + hop / speed_of_light_mps;
        }
    }
    return p;
}

} // namespace ofdmsense
