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
#include <cstdint>
#include <random>

#include <armadillo>

namespace ofdmsense {

// SplitMix64 step, used to derive independent seeds from a master seed.
std::uint64_t splitmix64(std::uint64_t& state);

// Derive the seed of an indexed substream (e.g. one per Monte Carlo trial).
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t stream_index);

// Seeded random source. All transforms are implemented on top of the raw
// 64-bit engine output so that sequences are stable across standard library
// versions; results are bit-reproducible for a fixed seed.
class Rng {
  public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t raw();

    double uniform();     // [0, 1)
    double uniform_pos(); // (0, 1]
    double uniform(double lo, double hi);

    // Integer in [0, n), unbiased.
    std::uint64_t uniform_int(std::uint64_t n);

    // Standard normal (Box-Muller).
    double normal();

    // Circularly-symmetric complex Gaussian with total variance `variance`.
    std::complex<double> cnormal(double variance);

    // Gamma(shape, 1) for shape >= 1 (Marsaglia-Tsang).
    double gamma(double shape);

    // k distinct indices drawn uniformly from [0, n), in draw order.
    arma::uvec sample_without_replacement(arma::uword n, arma::uword k);

    // Independent generator for stream `index`, derived deterministically.
    Rng substream(std::uint64_t index) const;

  private:
    std::mt19937_64 engine_;
    std::uint64_t seed_;
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

} // namespace ofdmsense
