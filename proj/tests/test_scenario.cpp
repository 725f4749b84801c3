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

#include <catch2/catch_amalgamated.hpp>

#include <fstream>

#include "ofdmsense/common.hpp"
#include "ofdmsense/scenario.hpp"
#include "support.hpp"

using namespace ofdmsense;
using testsupport::make_scenario;

// Reference values recomputed independently from the geometry with
// c = 299792458 m/s (two-user scenario: iUE at [5,14] m, SP at [17,6] m,
// f_c = 15 GHz).
namespace {
constexpr double k_lambda = 1.9986163867e-02;
constexpr double k_tau1 = 4.9587867709e-08;
constexpr double k_tau2 = 6.0134122445e-08;
constexpr double k_theta1 = 1.2277723864;
constexpr double k_theta2 = 0.3392926145;
constexpr double k_phi1 = -1.9138202672;
constexpr double k_mono1_sq = 4.1213998249e-12;
constexpr double k_mono2_sq = 1.9057352790e-12;
constexpr double k_direct1_sq = 1.1445819321e-08;
constexpr double k_cross12_sq = 2.9777113735e-12;
constexpr double k_tau12 = 1.0824142040e-07;
} // namespace

TEST_CASE("geometry-derived channel parameters match reference values")
{
    Rng rng(1);
    const ChannelParams p = derive_channel_params(make_scenario(), rng);

    CHECK(p.wavelength_m == Catch::Approx(k_lambda).epsilon(1e-10));
    CHECK(p.toa(0) == Catch::Approx(k_tau1).epsilon(1e-10));
    CHECK(p.toa(1) == Catch::Approx(k_tau2).epsilon(1e-10));
    CHECK(p.aoa(0) == Catch::Approx(k_theta1).epsilon(1e-9));
    CHECK(p.aoa(1) == Catch::Approx(k_theta2).epsilon(1e-9));
    CHECK(p.aod(0) == Catch::Approx(k_phi1).epsilon(1e-9));
    CHECK(p.toa_cross(0, 1) == Catch::Approx(k_tau12).epsilon(1e-10));

    CHECK(std::norm(p.mono_gains(0)) == Catch::Approx(k_mono1_sq).epsilon(1e-12));
    CHECK(std::norm(p.mono_gains(1)) == Catch::Approx(k_mono2_sq).epsilon(1e-12));
    CHECK(std::norm(p.direct_gains(0)) == Catch::Approx(k_direct1_sq).epsilon(1e-12));
    CHECK(std::norm(p.cross_gains(0, 1)) == Catch::Approx(k_cross12_sq).epsilon(1e-12));
}

TEST_CASE("scatter-path delay exceeds the object delay by the hop distance")
{
    Rng rng(2);
    const auto sc = make_scenario();
    const ChannelParams p = derive_channel_params(sc, rng);
    const double hop = arma::norm(sc.object_position(1) - sc.iue_positions[0]);
    CHECK(p.toa_cross(0, 1) - p.toa(1) ==
          Catch::Approx(hop / speed_of_light_mps).epsilon(1e-12));
    CHECK(p.toa_cross(0, 1) >= p.toa(1));
}

TEST_CASE("same seed reproduces bit-identical channel parameters")
{
    Rng a(77), b(77);
    const ChannelParams p = derive_channel_params(make_scenario(), a);
    const ChannelParams q = derive_channel_params(make_scenario(), b);
    CHECK(arma::all(p.mono_gains == q.mono_gains));
    CHECK(arma::all(p.direct_gains == q.direct_gains));
    CHECK(arma::all(arma::vectorise(p.cross_gains) == arma::vectorise(q.cross_gains)));

    Rng c(78);
    const ChannelParams r = derive_channel_params(make_scenario(), c);
    CHECK_FALSE(arma::all(p.mono_gains == r.mono_gains));
    // deterministic quantities do not depend on the seed
    CHECK(arma::all(p.toa == r.toa));
    CHECK(arma::all(p.aoa == r.aoa));
}

TEST_CASE("angles are wrapped to (-pi, pi]")
{
    Rng rng(5);
    auto sc = make_scenario();
    sc.iue_positions[0] = {-3.0, -0.001}; // third quadrant, aod wraps around
    const ChannelParams p = derive_channel_params(sc, rng);
    CHECK(p.aoa(0) > -M_PI);
    CHECK(p.aoa(0) <= M_PI);
    CHECK(p.aod(0) > -M_PI);
    CHECK(p.aod(0) <= M_PI);
}

TEST_CASE("config invariants are enforced")
{
    auto sc = make_scenario();
    sc.rue_position = {1.0, 0.0};
    CHECK_THROWS_AS(sc.validate(), geometry_error);

    sc = make_scenario();
    sc.sp_positions[0] = sc.iue_positions[0];
    CHECK_THROWS_AS(sc.validate(), geometry_error);

    sc = make_scenario();
    sc.sp_positions[0] = {0.0, 0.0};
    CHECK_THROWS_AS(sc.validate(), geometry_error);

    sc = make_scenario();
    sc.num_antennas = 1;
    CHECK_THROWS_AS(sc.validate(), std::invalid_argument);

    sc = make_scenario();
    sc.noise_power_w = 0.0;
    CHECK_THROWS_AS(sc.validate(), std::invalid_argument);

    sc = make_scenario();
    sc.tx_power_w = {0.05};
    CHECK_THROWS_AS(sc.validate(), std::invalid_argument);
}

TEST_CASE("config loads from JSON")
{
    const auto sc = make_scenario();
    const std::string path = "test_scenario_config.json";
    std::ofstream(path) << scenario_config_to_json(sc);
    const ScenarioConfig back = load_scenario_config(path);
    CHECK(back.carrier_freq_hz == sc.carrier_freq_hz);
    CHECK(back.num_subcarriers == sc.num_subcarriers);
    CHECK(back.noise_power_w == sc.noise_power_w);
    CHECK(back.iue_positions.size() == 1);
    CHECK(back.iue_positions[0](1) == 14.0);
    CHECK(back.tx_power_w == sc.tx_power_w);
    std::remove(path.c_str());
}
