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

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ofdmsense/crlb.hpp"
#include "ofdmsense/detect.hpp"
#include "ofdmsense/harness.hpp"

namespace {

int cmd_calibrate(double delta, unsigned shape, unsigned n, bool mc_check, std::uint64_t seed)
{
    const double beta = ofdmsense::calibrate_beta(delta, shape, n);
    const double achieved = ofdmsense::fwer_theoretical(beta, shape, n);
    std::printf("delta,shape,n,beta_star,theoretical_fwer\n");
    std::printf("%.12g,%u,%u,%.6f,%.8g\n", delta, shape, n, beta, achieved);
    if (mc_check) {
        ofdmsense::Rng rng(seed);
        const auto mc = ofdmsense::fwer_monte_carlo(beta, shape, n, 200000, 1.0, rng);
        std::printf("mc_fwer,mc_std_error\n%.8g,%.2g\n", mc.value, mc.std_error);
    }
    return 0;
}

int cmd_crlb(const std::string& config_path, unsigned overlap, const std::vector<double>& e0,
             double e1, unsigned realizations, std::uint64_t seed)
{
    const auto scenario = ofdmsense::load_scenario_config(config_path);
    std::printf("e0,target,deb_clean,deb_all,aeb_clean,aeb_all\n");
    for (double p : e0) {
        const auto b = ofdmsense::average_bounds(scenario, 32, 32, overlap, p, e1,
                                                 realizations, seed);
        for (arma::uword l = 0; l < b.deb_clean.n_elem; ++l) {
            const std::string label = (l < scenario.num_iue())
                                          ? "iue" + std::to_string(l + 1)
                                          : "sp" + std::to_string(l - scenario.num_iue() + 1);
            std::printf("%.12g,%s,%.8g,%.8g,%.8g,%.8g\n", p, label.c_str(), b.deb_clean(l),
                        b.deb_all(l), b.aeb_clean(l), b.aeb_all(l));
        }
    }
    return 0;
}

int cmd_run(const std::string& experiment, const std::string& config_path,
            const std::string& out_dir, unsigned trials, std::uint64_t seed)
{
    const auto scenario = ofdmsense::load_scenario_config(config_path);
    using Kind = ofdmsense::ExperimentSpec::Kind;

    std::vector<std::string> violations;
    if (experiment == "all") {
        violations = ofdmsense::run_all(scenario, out_dir, seed, trials);
    } else {
        Kind kind;
        std::string file;
        if (experiment == "beta") {
            kind = Kind::beta_sweep;
            file = "beta_sweep.csv";
        } else if (experiment == "fwer") {
            kind = Kind::fwer_vs_overlap;
            file = "fwer_vs_overlap.csv";
        } else if (experiment == "power") {
            kind = Kind::detection_power;
            file = "detection_power.csv";
        } else if (experiment == "rmse") {
            kind = Kind::rmse_vs_power;
            file = "rmse_vs_power.csv";
        } else {
            std::fprintf(stderr, "unknown experiment: %s\n", experiment.c_str());
            return 2;
        }
        auto spec = ofdmsense::ExperimentSpec::defaults(kind, scenario, seed);
        if (trials > 0)
            spec.trials = trials;
        std::filesystem::create_directories(out_dir);
        ofdmsense::ResultTable table;
        switch (kind) {
        case Kind::beta_sweep:
            table = ofdmsense::run_beta_sweep(spec);
            break;
        case Kind::fwer_vs_overlap:
            table = ofdmsense::run_fwer_vs_overlap(spec);
            break;
        case Kind::detection_power:
            table = ofdmsense::run_detection_power(spec);
            break;
        default:
            table = ofdmsense::run_rmse_sweep(spec);
            break;
        }
        table.write_csv(out_dir + "/" + file);
        violations = table.violations;
        if (experiment == "rmse") {
            auto spec2 = ofdmsense::ExperimentSpec::defaults(Kind::rmse_vs_overlap, scenario,
                                                             ofdmsense::derive_seed(seed, 2));
            if (trials > 0)
                spec2.trials = trials;
            auto table2 = ofdmsense::run_rmse_sweep(spec2);
            table2.write_csv(out_dir + "/rmse_vs_overlap.csv");
            violations.insert(violations.end(), table2.violations.begin(),
                              table2.violations.end());
        }
    }

    for (const auto& v : violations)
        std::fprintf(stderr, "ASSERTION FAILED: %s\n", v.c_str());
    std::printf("done (version %s); %zu assertion failure(s)\n",
                ofdmsense::version().c_str(), violations.size());
    return violations.empty() ? 0 : 1;
}

int cmd_dump(const std::string& config_path, const std::string& out_prefix, unsigned overlap,
             std::uint64_t seed)
{
    const auto scenario = ofdmsense::load_scenario_config(config_path);
    ofdmsense::Rng rng(seed);
    auto alloc = ofdmsense::allocate_resources(scenario.num_subcarriers, scenario.num_symbols,
                                               32, 32, overlap, rng);
    auto channel = ofdmsense::derive_channel_params(scenario, rng);
    auto tx = ofdmsense::synthesize_transmit(alloc, scenario.tx_power_w,
                                             scenario.num_antennas, rng);
    auto y = ofdmsense::synthesize_received(channel, tx, alloc, scenario.noise_power_w,
                                            scenario.subcarrier_spacing_hz, rng);
    ofdmsense::dump_realization(y, out_prefix);
    std::printf("wrote %s.tensor.bin, %s.masks.csv, %s.meta.json\n", out_prefix.c_str(),
                out_prefix.c_str(), out_prefix.c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Multi-user OFDM radar sensing: interference detection, estimation, bounds"};
    app.require_subcommand(1);

    // calibrate
    double delta = 0.01;
    unsigned shape = 180, n = 32;
    bool mc_check = false;
    std::uint64_t seed = 1;
    auto* cal = app.add_subcommand("calibrate", "Calibrate the detection threshold beta*");
    cal->add_option("--delta", delta, "Target familywise error rate")->required();
    cal->add_option("--shape", shape, "Gamma shape of each power statistic")->required();
    cal->add_option("--n", n, "Number of compared statistics")->required();
    cal->add_flag("--mc-check", mc_check, "Cross-check with a Monte Carlo estimate");
    cal->add_option("--seed", seed, "Seed for the Monte Carlo check");

    // crlb
    std::string config_path, out_dir = "out";
    unsigned overlap = 8;
    std::vector<double> e0_list{0.06};
    double e1 = 0.05;
    unsigned realizations = 50;
    auto* crlb = app.add_subcommand("crlb", "Delay/angle error bounds as CSV");
    crlb->add_option("--config", config_path, "Scenario config JSON")->required();
    crlb->add_option("--overlap", overlap, "Number of overlapping subcarriers");
    crlb->add_option("--e0", e0_list, "rUE transmit powers (list, watts)");
    crlb->add_option("--e1", e1, "iUE transmit power (watts)");
    crlb->add_option("--realizations", realizations, "Transmit realizations to average");
    crlb->add_option("--seed", seed, "Master seed");

    // run
    std::string experiment = "all";
    unsigned trials = 0;
    auto* run = app.add_subcommand("run", "Run Monte Carlo experiments and write CSVs");
    run->add_option("--experiment", experiment, "beta|fwer|power|rmse|all")->required();
    run->add_option("--config", config_path, "Scenario config JSON")->required();
    run->add_option("--out", out_dir, "Output directory");
    run->add_option("--trials", trials, "Override the per-experiment trial count");
    run->add_option("--seed", seed, "Master seed");

    // dump
    std::string out_prefix = "realization";
    auto* dump = app.add_subcommand("dump", "Dump one synthesized realization for debugging");
    dump->add_option("--config", config_path, "Scenario config JSON")->required();
    dump->add_option("--out", out_prefix, "Output path prefix");
    dump->add_option("--overlap", overlap, "Number of overlapping subcarriers");
    dump->add_option("--seed", seed, "Seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(cal))
            return cmd_calibrate(delta, shape, n, mc_check, seed);
        if (app.got_subcommand(crlb))
            return cmd_crlb(config_path, overlap, e0_list, e1, realizations, seed);
        if (app.got_subcommand(run))
            return cmd_run(experiment, config_path, out_dir, trials, seed);
        if (app.got_subcommand(dump))
            return cmd_dump(config_path, out_prefix, overlap, seed);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}
