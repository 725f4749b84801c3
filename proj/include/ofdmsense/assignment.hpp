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

namespace ofdmsense {

// Exact solution of the square linear assignment problem
// minimize Tr(X^T C) over permutation matrices X, by shortest augmenting
// paths (Jonker-Volgenant). Returns perm with perm(i) = assigned column
// of row i.
arma::uvec solve_assignment(const arma::mat& cost);

// Total cost of an assignment.
double assignment_cost(const arma::mat& cost, const arma::uvec& perm);

} // namespace ofdmsense
