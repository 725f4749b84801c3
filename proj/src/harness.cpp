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

#include "ofdmsense/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "ofdmsense/common.hpp"
#include "ofdmsense/crlb.hpp"

#ifndef OFDMSENSE_VERSION
#define OFDMSENSE_VERSION "0.0.0"
#endif

namespace ofdmsense {

std::string version() { return OFDMSENSE_VERSION; }

// rUE power used by the FWER validation experiments. The calibrated Gamma
// family describes the null subcarrier powers when the spatially white
// noise dominates; the monostatic echo is coherent across the array
// (rank O+L), so at sensing powers the null statistics spread wider than
// Gamma(T N_u) and the guarantee no longer applies to them.
static constexpr double k_calibration_null_e0_w = 1e-9;

ExperimentSpec ExperimentSpec::defaults(Kind kind, const ScenarioConfig& scenario,
                                        std::uint64_t seed)
{
    ExperimentSpec s;
    s.kind = kind;
    s.scenario = scenario;
    s.seed = seed;
    switch (kind) {
    case Kind::beta_sweep:
        s.sweep = arma::regspace(1.0, 0.05, 2.0);
        s.deltas = {};
        s.e0 = k_calibration_null_e0_w;
        s.overlap = 0;
        s.trials = 2000;
        break;
    case Kind::fwer_vs_overlap:
        s.sweep = {0, 2, 4, 8, 12, 16};
        s.deltas = {0.1, 0.01};
        s.e0 = k_calibration_null_e0_w;
        s.trials = 2000;
        break;
    case Kind::detection_power:
        s.sweep = {0.005, 0.01, 0.02, 0.03, 0.05, 0.075, 0.1};
        s.deltas = {0.1, 0.01, 0.001};
        s.e0 = 0.05;
        s.overlap = 8;
        s.trials = 10000;
        break;
    case Kind::rmse_vs_power:
        s.sweep = arma::regspace(0.01, 0.01, 0.10);
        s.delta = 1e-3;
        s.e1 = 0.05;
        s.overlap = 8;
        s.trials = 500;
        break;
    case Kind::rmse_vs_overlap:
        s.sweep = {0, 2, 4, 8, 12, 16};
        s.delta = 1e-3;
        s.e0 = 0.1;
        s.e1 = 0.05;
        s.trials = 500;
        break;
    }
    return s;
}

void ExperimentSpec::validate() const
{
    scenario.validate();
    if (sweep.n_elem == 0)
        throw std::invalid_argument("ExperimentSpec: empty sweep grid");
    if (trials < 1)
        throw std::invalid_argument("ExperimentSpec: need at least one trial");
    if (n_rue + n_iue > 2 * scenario.num_subcarriers)
        throw std::invalid_argument("ExperimentSpec: subcarrier counts exceed the grid");
}

// ------------------------------------------------------------- CSV output

namespace {

std::string format_double(double v)
{
    if (std::isnan(v))
        return "na";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

} // namespace

void ResultTable::write_csv(const std::string& path) const
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out << "experiment,swept_name,swept_value,series,target,metric,value,std_error,"
           "failures,trials\n";
    for (const ResultRow& r : rows) {
        out << experiment << ',' << swept_name << ',' << format_double(r.swept_value) << ','
            << r.series << ',' << r.target << ',' << r.metric << ','
            << format_double(r.value) << ',' << format_double(r.std_error) << ','
            << r.failures << ',' << r.trials << '\n';
    }
}

// --------------------------------------------------------- trial plumbing

namespace {

ScenarioConfig with_powers(const ScenarioConfig& base, double e0, double e1)
{
    ScenarioConfig sc = base;
    sc.tx_power_w.assign(base.num_iue() + 1, e1);
    sc.tx_power_w[0] = e0;
    return sc;
}

struct TrialSignals {
    ResourceAllocation alloc;
    ChannelParams channel;
    TransmitGrid tx;
    ReceivedTensor received;
};

TrialSignals make_trial_signals(const ScenarioConfig& sc, arma::uword n_rue, arma::uword n_iue,
                                arma::uword overlap, Rng& rng)
{
    TrialSignals s;
    s.alloc = allocate_resources(sc.num_subcarriers, sc.num_symbols, n_rue, n_iue, overlap, rng);
    s.channel = derive_channel_params(sc, rng);
    s.tx = synthesize_transmit(s.alloc, sc.tx_power_w, sc.num_antennas, rng);
    s.received = synthesize_received(s.channel, s.tx, s.alloc, sc.noise_power_w,
                                     sc.subcarrier_spacing_hz, rng);
    return s;
}

arma::umat product_resources(const arma::uvec& freqs, const arma::uvec& times)
{
    arma::umat r(2, freqs.n_elem * times.n_elem);
    arma::uword c = 0;
    for (arma::uword n : freqs)
        for (arma::uword t : times)
            r.col(c++) = arma::uvec{n, t};
    return r;
}

void gather_snapshots(const ReceivedTensor& y, const arma::cx_cube& x0, const arma::umat& res,
                      arma::cx_mat& snapshots, arma::cx_mat& tx, arma::uvec& subc)
{
    const arma::uword m = res.n_cols;
    snapshots.set_size(y.num_antennas(), m);
    tx.set_size(y.num_antennas(), m);
    subc.set_size(m);
    for (arma::uword c = 0; c < m; ++c) {
        const arma::uword n = res(0, c);
        const arma::uword t = res(1, c);
        snapshots.col(c) = y.samples.slice(t).col(n);
        tx.col(c) = x0.slice(t).col(n);
        subc(c) = n;
    }
}

struct MethodEstimates {
    bool ok = false;
    std::vector<DelayAnglePair> pairs;
    arma::vec angles;
};

struct SensingTrial {
    MethodEstimates naive, oracle, proposed;
};

MethodEstimates run_omp_method(const TrialSignals& sig, const arma::umat& res,
                               const AngleSpectrum* music, arma::uword num_targets,
                               double delta_f, const OmpConfig& cfg)
{
    MethodEstimates m;
    if (res.n_cols == 0)
        return m;
    try {
        arma::cx_mat snapshots, tx;
        arma::uvec subc;
        gather_snapshots(sig.received, sig.tx.user_symbols[0], res, snapshots, tx, subc);
        const OmpResult omp = omp_estimate(snapshots, tx, subc, delta_f, num_targets, cfg);
        if (music != nullptr) {
            const TargetEstimateSet set = associate(omp, *music);
            m.pairs = set.pairs;
            m.angles = set.updated_angles;
        } else {
            m.pairs = omp.pairs;
            m.angles.set_size(omp.pairs.size());
            for (arma::uword i = 0; i < omp.pairs.size(); ++i)
                m.angles(i) = omp.pairs[i].angle_rad;
        }
        m.ok = true;
    } catch (const estimation_error&) {
    } catch (const std::invalid_argument&) {
    }
    return m;
}

SensingTrial run_sensing_trial(const ScenarioConfig& sc, arma::uword n_rue, arma::uword n_iue,
                               arma::uword overlap, const DetectionConfig& freq_cfg,
                               const DetectionConfig& time_cfg, const OmpConfig& omp_cfg,
                               Rng& rng)
{
    SensingTrial out;
    const TrialSignals sig = make_trial_signals(sc, n_rue, n_iue, overlap, rng);
    const double delta_f = sc.subcarrier_spacing_hz;
    const arma::uword s = sc.num_objects();

    const arma::umat res_all = rue_resources(sig.alloc);

    out.naive = run_omp_method(sig, res_all, nullptr, s, delta_f, omp_cfg);

    AngleSpectrum music;
    bool music_ok = true;
    try {
        arma::cx_mat snapshots, tx;
        arma::uvec subc;
        gather_snapshots(sig.received, sig.tx.user_symbols[0], res_all, snapshots, tx, subc);
        music = music_estimate(snapshots, s);
    } catch (const estimation_error&) {
        music_ok = false;
    }
    if (!music_ok)
        return out;

    out.oracle = run_omp_method(sig, clean_resources(sig.alloc), &music, s, delta_f, omp_cfg);

    const DetectionResult det = detect_interference(sig.received, sig.alloc, freq_cfg, time_cfg);
    out.proposed = run_omp_method(sig, product_resources(det.clean_freq, det.clean_time),
                                  &music, s, delta_f, omp_cfg);
    return out;
}

std::string target_label(const ScenarioConfig& sc, arma::uword l)
{
    if (l < sc.num_iue())
        return "iue" + std::to_string(l + 1);
    return "sp" + std::to_string(l - sc.num_iue() + 1);
}

double binomial_se(double p, double n)
{
    return std::sqrt(std::max(p * (1.0 - p), 0.0) / std::max(n, 1.0));
}

} // namespace

// ------------------------------------------------------------ experiments

ResultTable run_beta_sweep(const ExperimentSpec& spec)
{
    spec.validate();
    ResultTable table;
    table.experiment = "beta_sweep";
    table.swept_name = "beta";

    const ScenarioConfig sc = with_powers(spec.scenario, spec.e0, spec.e1);
    const arma::uword shape = spec.scenario.num_symbols * spec.scenario.num_antennas;
    const arma::uword n_stats = spec.n_rue;
    const arma::uword n_beta = spec.sweep.n_elem;

    // Exceedance indicators per trial and beta, from one shared set of
    // global-null draws (overlap forced to zero).
    arma::umat exceeded(n_beta, spec.trials, arma::fill::zeros);
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t tr = 0; tr < static_cast<std::int64_t>(spec.trials); ++tr) {
        Rng rng(derive_seed(spec.seed, tr));
        const TrialSignals sig = make_trial_signals(sc, spec.n_rue, spec.n_iue, 0, rng);
        const PowerStats stats = subcarrier_powers(sig.received, sig.alloc);
        const arma::vec sorted = arma::sort(stats.power);
        const double pivot = sorted(spec.kappa - 1);
        const double top = sorted(sorted.n_elem - 1);
        for (arma::uword b = 0; b < n_beta; ++b)
            exceeded(b, tr) = (top > pivot * spec.sweep(b)) ? 1 : 0;
    }

    for (arma::uword b = 0; b < n_beta; ++b) {
        const double beta = spec.sweep(b);
        const double theory = fwer_theoretical(beta, shape, n_stats);
        const double emp = static_cast<double>(arma::accu(exceeded.row(b))) /
                           static_cast<double>(spec.trials);
        const double se = binomial_se(emp, static_cast<double>(spec.trials));
        table.rows.push_back({beta, "theory", "", "fwer", theory, 0.0, 0, spec.trials});
        table.rows.push_back({beta, "empirical", "", "fwer", emp, se, 0, spec.trials});
        if (std::abs(emp - theory) > 3.0 * se + 1e-9) {
            table.violations.push_back("beta_sweep: empirical FWER " + format_double(emp) +
                                       " deviates from theory " + format_double(theory) +
                                       " at beta=" + format_double(beta));
        }
    }
    return table;
}

ResultTable run_fwer_vs_overlap(const ExperimentSpec& spec)
{
    spec.validate();
    ResultTable table;
    table.experiment = "fwer_vs_overlap";
    table.swept_name = "overlap";

    const ScenarioConfig sc = with_powers(spec.scenario, spec.e0, spec.e1);
    const arma::uword shape = spec.scenario.num_symbols * spec.scenario.num_antennas;
    const arma::uword n_stats = spec.n_rue;

    arma::vec betas(spec.deltas.n_elem);
    for (arma::uword d = 0; d < spec.deltas.n_elem; ++d)
        betas(d) = calibrate_beta(spec.deltas(d), shape, n_stats);

    for (arma::uword k = 0; k < spec.sweep.n_elem; ++k) {
        const arma::uword overlap = static_cast<arma::uword>(spec.sweep(k));
        arma::umat err(spec.deltas.n_elem, spec.trials, arma::fill::zeros);
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t tr = 0; tr < static_cast<std::int64_t>(spec.trials); ++tr) {
            Rng rng(derive_seed(spec.seed, k * spec.trials + tr));
            const TrialSignals sig = make_trial_signals(sc, spec.n_rue, spec.n_iue, overlap, rng);
            const PowerStats stats = subcarrier_powers(sig.received, sig.alloc);
            const arma::uvec clean = sig.alloc.clean_freq();
            for (arma::uword d = 0; d < spec.deltas.n_elem; ++d) {
                const arma::uvec detected = threshold_detect(stats, spec.kappa, betas(d));
                bool false_hit = false;
                for (arma::uword n : detected)
                    if (std::binary_search(clean.begin(), clean.end(), n)) {
                        false_hit = true;
                        break;
                    }
                err(d, tr) = false_hit ? 1 : 0;
            }
        }
        for (arma::uword d = 0; d < spec.deltas.n_elem; ++d) {
            const double fwer = static_cast<double>(arma::accu(err.row(d))) /
                                static_cast<double>(spec.trials);
            const double se = binomial_se(fwer, static_cast<double>(spec.trials));
            const std::string series = "delta=" + format_double(spec.deltas(d));
            table.rows.push_back({static_cast<double>(overlap), series, "", "fwer", fwer, se,
                                  0, spec.trials});
            if (fwer > spec.deltas(d) + 3.0 * se)
                table.violations.push_back("fwer_vs_overlap: FWER " + format_double(fwer) +
                                           " exceeds delta=" + format_double(spec.deltas(d)) +
                                           " at overlap=" + std::to_string(overlap));
        }
    }
    return table;
}

ResultTable run_detection_power(const ExperimentSpec& spec)
{
    spec.validate();
    ResultTable table;
    table.experiment = "detection_power";
    table.swept_name = "e1";

    const arma::uword shape = spec.scenario.num_symbols * spec.scenario.num_antennas;
    const arma::uword n_stats = spec.n_rue;
    arma::vec betas(spec.deltas.n_elem);
    for (arma::uword d = 0; d < spec.deltas.n_elem; ++d)
        betas(d) = calibrate_beta(spec.deltas(d), shape, n_stats);

    for (arma::uword k = 0; k < spec.sweep.n_elem; ++k) {
        const double e1 = spec.sweep(k);
        if (spec.overlap == 0 || e1 <= 0.0) {
            for (arma::uword d = 0; d < spec.deltas.n_elem; ++d)
                table.rows.push_back({e1, "delta=" + format_double(spec.deltas(d)), "",
                                      "detection_rate", arma::datum::nan, 0.0, 0, spec.trials});
            continue;
        }
        const ScenarioConfig sc = with_powers(spec.scenario, spec.e0, e1);
        arma::umat hits(spec.deltas.n_elem, spec.trials, arma::fill::zeros);
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t tr = 0; tr < static_cast<std::int64_t>(spec.trials); ++tr) {
            Rng rng(derive_seed(spec.seed, k * spec.trials + tr));
            const TrialSignals sig = make_trial_signals(sc, spec.n_rue, spec.n_iue,
                                                        spec.overlap, rng);
            const PowerStats stats = subcarrier_powers(sig.received, sig.alloc);
            const arma::uvec clean = sig.alloc.clean_freq();
            for (arma::uword d = 0; d < spec.deltas.n_elem; ++d) {
                const arma::uvec detected = threshold_detect(stats, spec.kappa, betas(d));
                arma::uword true_hits = 0;
                for (arma::uword n : detected)
                    if (!std::binary_search(clean.begin(), clean.end(), n))
                        ++true_hits;
                hits(d, tr) = true_hits;
            }
        }
        const double instances = static_cast<double>(spec.overlap) *
                                 static_cast<double>(spec.trials);
        for (arma::uword d = 0; d < spec.deltas.n_elem; ++d) {
            const double rate = static_cast<double>(arma::accu(hits.row(d))) / instances;
            const double se = binomial_se(rate, instances);
            table.rows.push_back({e1, "delta=" + format_double(spec.deltas(d)), "",
                                  "detection_rate", rate, se, 0, spec.trials});
            if (spec.deltas(d) <= 1e-3 && std::abs(e1 - 0.05) < 1e-12 &&
                std::abs(spec.e0 - 0.05) < 1e-12 && rate <= 0.99)
                table.violations.push_back(
                    "detection_power: rate " + format_double(rate) +
                    " at E1=0.05, delta=1e-3 is not above 0.99");
        }
    }
    return table;
}

ResultTable run_rmse_sweep(const ExperimentSpec& spec)
{
    spec.validate();
    const bool sweep_e0 = (spec.kind != ExperimentSpec::Kind::rmse_vs_overlap);
    ResultTable table;
    table.experiment = sweep_e0 ? "rmse_vs_power" : "rmse_vs_overlap";
    table.swept_name = sweep_e0 ? "e0" : "overlap";

    const arma::uword s = spec.scenario.num_objects();
    const arma::vec truth_delays = [&] {
        Rng rng(1);
        return derive_channel_params(with_powers(spec.scenario, 1.0, 1.0), rng).toa;
    }();
    const arma::vec truth_angles = [&] {
        Rng rng(1);
        return derive_channel_params(with_powers(spec.scenario, 1.0, 1.0), rng).aoa;
    }();

    DetectionConfig freq_cfg, time_cfg;
    freq_cfg.kappa = time_cfg.kappa = spec.kappa;
    freq_cfg.delta = time_cfg.delta = spec.delta;
    freq_cfg.shape = spec.scenario.num_symbols * spec.scenario.num_antennas;
    freq_cfg.n_stats = spec.n_rue;
    time_cfg.shape = spec.n_rue * spec.scenario.num_antennas;
    time_cfg.n_stats = spec.scenario.num_symbols;
    freq_cfg.beta = calibrate_beta(freq_cfg.delta, freq_cfg.shape, freq_cfg.n_stats);
    time_cfg.beta = calibrate_beta(time_cfg.delta, time_cfg.shape, time_cfg.n_stats);

    OmpConfig omp_cfg;
    omp_cfg.delay_max_s = 1.0 / (4.0 * spec.scenario.subcarrier_spacing_hz);

    const char* method_names[3] = {"naive", "oracle", "proposed"};

    for (arma::uword k = 0; k < spec.sweep.n_elem; ++k) {
        const double e0 = sweep_e0 ? spec.sweep(k) : spec.e0;
        const arma::uword overlap =
            sweep_e0 ? spec.overlap : static_cast<arma::uword>(spec.sweep(k));
        const double swept_value = spec.sweep(k);
        const ScenarioConfig sc = with_powers(spec.scenario, e0, spec.e1);

        std::vector<SensingTrial> trials(spec.trials);
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t tr = 0; tr < static_cast<std::int64_t>(spec.trials); ++tr) {
            Rng rng(derive_seed(spec.seed, k * spec.trials + tr));
            trials[tr] = run_sensing_trial(sc, spec.n_rue, spec.n_iue, overlap, freq_cfg,
                                           time_cfg, omp_cfg, rng);
        }

        std::vector<RmseAccumulator> acc(3, RmseAccumulator(s));
        for (const SensingTrial& trial : trials) {
            const MethodEstimates* methods[3] = {&trial.naive, &trial.oracle, &trial.proposed};
            for (int m = 0; m < 3; ++m) {
                if (methods[m]->ok)
                    acc[m].add(methods[m]->pairs, methods[m]->angles, truth_delays,
                               truth_angles);
                else
                    acc[m].add_failure();
            }
        }

        for (int m = 0; m < 3; ++m) {
            if (acc[m].trials() == 0)
                continue;
            const arma::vec dr = acc[m].delay_rmse(), ar = acc[m].angle_rmse();
            const arma::vec dse = acc[m].delay_rmse_se(), ase = acc[m].angle_rmse_se();
            for (arma::uword l = 0; l < s; ++l) {
                table.rows.push_back({swept_value, method_names[m],
                                      target_label(spec.scenario, l), "delay_rmse", dr(l),
                                      dse(l), acc[m].failures(), acc[m].trials()});
                table.rows.push_back({swept_value, method_names[m],
                                      target_label(spec.scenario, l), "angle_rmse", ar(l),
                                      ase(l), acc[m].failures(), acc[m].trials()});
            }
        }

        const BoundSummary bound =
            average_bounds(spec.scenario, spec.n_rue, spec.n_iue, overlap, e0, spec.e1,
                           spec.bound_realizations, derive_seed(spec.seed, 900000 + k));
        for (arma::uword l = 0; l < s; ++l) {
            const std::string target = target_label(spec.scenario, l);
            table.rows.push_back({swept_value, "bound", target, "deb_clean",
                                  bound.deb_clean(l), 0.0, 0, spec.bound_realizations});
            table.rows.push_back({swept_value, "bound", target, "deb_all", bound.deb_all(l),
                                  0.0, 0, spec.bound_realizations});
            table.rows.push_back({swept_value, "bound", target, "aeb_clean",
                                  bound.aeb_clean(l), 0.0, 0, spec.bound_realizations});
            table.rows.push_back({swept_value, "bound", target, "aeb_all", bound.aeb_all(l),
                                  0.0, 0, spec.bound_realizations});
        }

        // Oracle dominance over the naive baseline whenever interference exists.
        if (overlap > 0 && acc[1].trials() > 0 && acc[0].trials() > 0) {
            const arma::vec d_o = acc[1].delay_rmse(), d_n = acc[0].delay_rmse();
            const arma::vec s_o = acc[1].delay_rmse_se(), s_n = acc[0].delay_rmse_se();
            for (arma::uword l = 0; l < s; ++l) {
                const double slack = 2.0 * std::hypot(s_o(l), s_n(l));
                if (d_o(l) > d_n(l) + slack)
                    table.violations.push_back(
                        table.experiment + ": oracle delay RMSE above naive at " +
                        table.swept_name + "=" + format_double(swept_value));
            }
        }
    }
    return table;
}

BoundSummary average_bounds(const ScenarioConfig& scenario, arma::uword n_rue,
                            arma::uword n_iue, arma::uword overlap, double e0, double e1,
                            arma::uword realizations, std::uint64_t seed)
{
    if (realizations == 0)
        throw std::invalid_argument("average_bounds: need at least one realization");
    const ScenarioConfig sc = with_powers(scenario, e0, e1);
    const arma::uword s = sc.num_objects();

    arma::mat deb_c(s, realizations), aeb_c(s, realizations);
    arma::mat deb_a(s, realizations), aeb_a(s, realizations);
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t r = 0; r < static_cast<std::int64_t>(realizations); ++r) {
        Rng rng(derive_seed(seed, r));
        const TrialSignals sig = make_trial_signals(sc, n_rue, n_iue, overlap, rng);
        const ParamVector pv = ParamVector::from_channel(sig.channel);
        const arma::mat f_all =
            fim(pv, rue_resources(sig.alloc), sig.tx.user_symbols[0], sig.alloc,
                sig.tx.symbol_variance, sc.noise_power_w, sc.subcarrier_spacing_hz);
        const arma::mat f_cln =
            fim(pv, clean_resources(sig.alloc), sig.tx.user_symbols[0], sig.alloc,
                sig.tx.symbol_variance, sc.noise_power_w, sc.subcarrier_spacing_hz);
        const CrlbReport rep_all = bounds(f_all, sc.num_iue(), sc.num_sp());
        const CrlbReport rep_cln = bounds(f_cln, sc.num_iue(), sc.num_sp());
        deb_a.col(r) = rep_all.deb;
        aeb_a.col(r) = rep_all.aeb;
        deb_c.col(r) = rep_cln.deb;
        aeb_c.col(r) = rep_cln.aeb;
    }

    BoundSummary out;
    out.deb_all = arma::mean(deb_a, 1);
    out.aeb_all = arma::mean(aeb_a, 1);
    out.deb_clean = arma::mean(deb_c, 1);
    out.aeb_clean = arma::mean(aeb_c, 1);
    return out;
}

std::string config_hash(const ScenarioConfig& scenario)
{
    const std::string text = scenario_config_to_json(scenario);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::vector<std::string> run_all(const ScenarioConfig& scenario, const std::string& out_dir,
                                 std::uint64_t seed, arma::uword trial_override)
{
    std::filesystem::create_directories(out_dir);
    std::vector<std::string> violations;
    nlohmann::json manifest;
    manifest["version"] = version();
    manifest["seed"] = seed;
    manifest["config_hash"] = config_hash(scenario);
    manifest["experiments"] = nlohmann::json::array();

    using Kind = ExperimentSpec::Kind;
    const std::pair<Kind, std::string> plan[] = {
        {Kind::beta_sweep, "beta_sweep.csv"},
        {Kind::fwer_vs_overlap, "fwer_vs_overlap.csv"},
        {Kind::detection_power, "detection_power.csv"},
        {Kind::rmse_vs_power, "rmse_vs_power.csv"},
        {Kind::rmse_vs_overlap, "rmse_vs_overlap.csv"},
    };
    std::uint64_t stream = 1;
    for (const auto& [kind, file] : plan) {
        ExperimentSpec spec = ExperimentSpec::defaults(kind, scenario, derive_seed(seed, stream++));
        if (trial_override > 0)
            spec.trials = trial_override;
        ResultTable table;
        switch (kind) {
        case Kind::beta_sweep:
            table = run_beta_sweep(spec);
            break;
        case Kind::fwer_vs_overlap:
            table = run_fwer_vs_overlap(spec);
            break;
        case Kind::detection_power:
            table = run_detection_power(spec);
            break;
        default:
            table = run_rmse_sweep(spec);
            break;
        }
        const std::string path = out_dir + "/" + file;
        table.write_csv(path);
        violations.insert(violations.end(), table.violations.begin(), table.violations.end());
        manifest["experiments"].push_back(
            {{"experiment", table.experiment}, {"file", file}, {"trials", spec.trials},
             {"seed", spec.seed}});
    }
    std::ofstream(out_dir + "/manifest.json") << manifest.dump(2) << "\n";
    return violations;
}

} // namespace ofdmsense
