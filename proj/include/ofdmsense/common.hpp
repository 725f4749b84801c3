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
#include <stdexcept>
#include <string>

namespace ofdmsense {

inline constexpr double speed_of_light_mps = 299792458.0;

// Invalid geometry (coincident positions, zero distances).
struct geometry_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Infeasible resource allocation request.
struct allocation_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// An estimator could not produce the requested output (e.g. too few
// spectrum peaks, zero observation). Callers record a trial failure.
struct estimation_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Numerical failure (non-convergent quadrature, ill-conditioned solve).
struct numerical_error : std::runtime_error {
    explicit numerical_error(const std::string& msg, double diagnostic = 0.0)
        : std::runtime_error(msg), diagnostic(diagnostic) {}
    double diagnostic;
};

// Wrap an angle to (-pi, pi].
inline double wrap_angle(double a)
{
    a = std::remainder(a, 2.0 * M_PI);
    if (a <= -M_PI)
        a += 2.0 * M_PI;
    return a;
}

} // namespace ofdmsense
