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

#include <string>
#include <vector>

#include <armadillo>

#include "ofdmsense/detect.hpp"
#include "ofdmsense/estimate.hpp"
#include "ofdmsense/scenario.hpp"

namespace ofdmsense {

std::string version();

// Monte Carlo experiment description. `sweep` is the grid of the swept
// variable named by the kind: beta factors, overlap counts, interferer
// powers E_1, or rUE powers E_0.
struct ExperimentSpec {
    enum class Kind { beta_sweep, fwer_vs_overlap, detection_power, rmse_vs_power,
                      rmse_vs_overlap };

    Kind kind = Kind::beta_sweep;
    ScenarioConfig scenario;
    arma::vec sweep;
    arma::vec deltas;   // significance levels reported side by side
    double delta = 1e-3; // pipeline level for rmse experiments
    arma::uword kappa = 1;
    double e0 = 0.05;
    double e1 = 0.05;
    arma::uword overlap = 8;
    arma::uword n_rue = 32;
    arma::uword n_iue = 32;
    arma::uword trials = 2000;
    arma::uword bound_realizations = 50;
    std::uint64_t seed = 1;

    // Paper-scale defaults for each experiment kind.
    static ExperimentSpec defaults(Kind kind, const ScenarioConfig& scenario,
                                   std::uint64_t seed);
    void validate() const;
};

// Tidy result rows: one (swept value, series, target, metric) cell each.
struct ResultRow {
    double swept_value = 0.0;
    std::string series; // method name or delta label
    std::string target; // per-target metrics, or "" for aggregate rows
    std::string metric;
    double value = 0.0;
    double std_error = 0.0;
    arma::uword failures = 0;
    arma::uword trials = 0;
};

struct ResultTable {
    std::string experiment;
    std::string swept_name;
    std::vector<ResultRow> rows;

    void write_csv(const std::string& path) const;
    // Violations of the experiment's hard guarantees (empty when all hold).
    std::vector<std::string> violations;
};

// FWER under the global null versus beta, theoretical and empirical.
ResultTable run_beta_sweep(const ExperimentSpec& spec);

// Empirical FWER for varying overlap at calibrated beta*(delta).
ResultTable run_fwer_vs_overlap(const ExperimentSpec& spec);

// True-detection rate of interfered subcarriers versus interferer power.
ResultTable run_detection_power(const ExperimentSpec& spec);

// Delay/angle RMSE of naive, oracle and proposed pipelines with DEB/AEB
// bounds, versus E_0 or versus overlap.
ResultTable run_rmse_sweep(const ExperimentSpec& spec);

// Average delay/angle error bounds over transmit realizations, for the
// full rUE resource set ("all") and the interference-free set ("clean").
struct BoundSummary {
    arma::vec deb_clean, aeb_clean;
    arma::vec deb_all, aeb_all;
};
BoundSummary average_bounds(const ScenarioConfig& scenario, arma::uword n_rue,
                            arma::uword n_iue, arma::uword overlap, double e0, double e1,
                            arma::uword realizations, std::uint64_t seed);

// Run every experiment, write one CSV per figure plus a manifest with the
// config hash, seed and version. Returns all hard-assertion violations.
std::vector<std::string> run_all(const ScenarioConfig& scenario, const std::string& out_dir,
                                 std::uint64_t seed, arma::uword trial_override = 0);

// FNV-1a hash of the canonical config serialization, as fixed-width hex.
std::string config_hash(const ScenarioConfig& scenario);

} // namespace ofdmsense
