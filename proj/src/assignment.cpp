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

#include "ofdmsense/assignment.hpp"

#include <limits>
#include <stdexcept>
#include <vector>

namespace ofdmsense {

arma::uvec solve_assignment(const arma::mat& cost)
{
    if (cost.n_rows != cost.n_cols)
        throw std::invalid_argument("solve_assignment: cost matrix must be square");
    const arma::uword n = cost.n_rows;
    if (n == 0)
        return {};
    if (!cost.is_finite())
        throw std::invalid_argument("solve_assignment: cost entries must be finite");

    const double inf = std::numeric_limits<double>::infinity();
    // Dual potentials and matching, 1-based with a virtual row/column 0.
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<arma::uword> match(n + 1, 0); // match[col] = row occupying col
    std::vector<arma::uword> way(n + 1, 0);

    for (arma::uword i = 1; i <= n; ++i) {
        match[0] = i;
        arma::uword j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<bool> used(n + 1, false);
        do {
            used[j0] = true;
            const arma::uword i0 = match[j0];
            double delta = inf;
            arma::uword j1 = 0;
            for (arma::uword j = 1; j <= n; ++j) {
                if (used[j])
                    continue;
                const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (arma::uword j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (match[j0] != 0);
        do {
            const arma::uword j1 = way[j0];
            match[j0] = match[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    arma::uvec perm(n);
    for (arma::uword j = 1; j <= n; ++j)
        perm(match[j] - 1) = j - 1;
    return perm;
}

double assignment_cost(const arma::mat& cost, const arma::uvec& perm)
{
    double total = 0.0;
    for (arma::uword i = 0; i < perm.n_elem; ++i)
        total += cost(i, perm(i));
    return total;
}

} // namespace ofdmsense
