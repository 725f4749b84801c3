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

#include "ofdmsense/random.hpp"

using namespace ofdmsense;

TEST_CASE("identical seeds reproduce identical streams")
{
    Rng a(42), b(42);
    for (int i = 0; i < 1000; ++i) {
        REQUIRE(a.raw() == b.raw());
    }
    Rng c(42), d(43);
    bool all_equal = true;
    for (int i = 0; i < 16; ++i)
        all_equal = all_equal && (c.raw() == d.raw());
    CHECK_FALSE(all_equal);
}

TEST_CASE("uniform stays in [0,1) with the right mean")
{
    Rng rng(7);
    double acc = 0.0, mn = 1.0, mx = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform();
        acc += u;
        mn = std::min(mn, u);
        mx = std::max(mx, u);
    }
    CHECK(mn >= 0.0);
    CHECK(mx < 1.0);
    CHECK(std::abs(acc / n - 0.5) < 0.005);
}

TEST_CASE("normal and gamma moments")
{
    Rng rng(11);
    const int n = 200000;
    double m1 = 0.0, m2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = rng.normal();
        m1 += z;
        m2 += z * z;
    }
    CHECK(std::abs(m1 / n) < 0.01);
    CHECK(std::abs(m2 / n - 1.0) < 0.02);

    const double shape = 180.0;
    double g1 = 0.0, g2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double g = rng.gamma(shape);
        g1 += g;
        g2 += g * g;
    }
    const double mean = g1 / n;
    const double var = g2 / n - mean * mean;
    CHECK(std::abs(mean - shape) < 0.2);
    CHECK(std::abs(var - shape) / shape < 0.02);
}

TEST_CASE("complex gaussian variance")
{
    Rng rng(5);
    const double var = 3.0;
    double acc = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i)
        acc += std::norm(rng.cnormal(var));
    CHECK(std::abs(acc / n - var) / var < 0.02);
}

TEST_CASE("sampling without replacement")
{
    Rng rng(3);
    const arma::uvec pick = rng.sample_without_replacement(64, 32);
    REQUIRE(pick.n_elem == 32);
    CHECK(arma::unique(pick).eval().n_elem == 32);
    CHECK(pick.max() < 64);
    CHECK_THROWS_AS(rng.sample_without_replacement(4, 5), std::invalid_argument);
}

TEST_CASE("substream derivation is deterministic and distinct")
{
    Rng rng(99);
    Rng s0 = rng.substream(0);
    Rng s1 = rng.substream(1);
    CHECK(s0.raw() != s1.raw());
    Rng s0b = Rng(99).substream(0);
    Rng s0c = Rng(99).substream(0);
    CHECK(s0b.raw() == s0c.raw());
}
