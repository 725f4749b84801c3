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

#include "ofdmsense/detect.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "ofdmsense/common.hpp"

namespace ofdmsense {

void DetectionConfig::validate() const
{
    if (kappa < 1 || (n_stats > 0 && kappa > n_stats))
        throw std::invalid_argument("DetectionConfig: kappa must be in [1, n_stats]");
    if (beta < 1.0)
        throw std::invalid_argument("DetectionConfig: beta must be >= 1");
    if (delta <= 0.0 || delta >= 1.0)
        throw std::invalid_argument("DetectionConfig: delta must be in (0, 1)");
}

PowerStats subcarrier_powers(const ReceivedTensor& y, const ResourceAllocation& alloc)
{
    if (alloc.rue_freq.n_elem == 0 || alloc.rue_time.n_elem == 0)
        throw std::invalid_argument("subcarrier_powers: empty rUE allocation");
    PowerStats s;
    s.index = alloc.rue_freq;
    s.power.zeros(s.index.n_elem);
    for (arma::uword f = 0; f < s.index.n_elem; ++f) {
        double acc = 0.0;
        for (arma::uword t : alloc.rue_time)
            acc += arma::accu(arma::square(arma::abs(
                arma::cx_vec(y.samples.slice(t).col(s.index(f))))));
        s.power(f) = acc;
    }
    return s;
}

PowerStats slot_powers(const ReceivedTensor& y, const ResourceAllocation& alloc)
{
    if (alloc.rue_freq.n_elem == 0 || alloc.rue_time.n_elem == 0)
        throw std::invalid_argument("slot_powers: empty rUE allocation");
    PowerStats s;
    s.index = alloc.rue_time;
    s.power.zeros(s.index.n_elem);
    for (arma::uword i = 0; i < s.index.n_elem; ++i) {
        double acc = 0.0;
        for (arma::uword n : alloc.rue_freq)
            acc += arma::accu(arma::square(arma::abs(
                arma::cx_vec(y.samples.slice(s.index(i)).col(n)))));
        s.power(i) = acc;
    }
    return s;
}

arma::uvec threshold_detect(const PowerStats& powers, arma::uword kappa, double beta)
{
    const arma::uword n = powers.power.n_elem;
    if (n == 0)
        throw std::invalid_argument("threshold_detect: empty input");
    if (kappa < 1 || kappa > n)
        throw std::invalid_argument("threshold_detect: kappa out of range");
    if (beta < 1.0)
        throw std::invalid_argument("threshold_detect: beta must be >= 1");

    arma::vec sorted = arma::sort(powers.power);
    const double threshold = sorted(kappa - 1) * beta;
    std::vector<arma::uword> hits;
    for (arma::uword i = 0; i < n; ++i)
        if (powers.power(i) > threshold)
            hits.push_back(powers.index(i));
    return arma::uvec(hits);
}

namespace {

arma::uvec set_difference(const arma::uvec& universe, const arma::uvec& removed)
{
    std::vector<arma::uword> out;
    for (arma::uword v : universe)
        if (!std::binary_search(removed.begin(), removed.end(), v))
            out.push_back(v);
    return arma::uvec(out);
}

void require_subset(const arma::uvec& sub, const arma::uvec& super, const char* what)
{
    for (arma::uword v : sub)
        if (!std::binary_search(super.begin(), super.end(), v))
            throw std::invalid_argument(std::string(what) + ": detected index outside the used set");
}

} // namespace

CleanSet estimate_clean_set(const ResourceAllocation& alloc, const arma::uvec& freq_detected,
                            const arma::uvec& time_detected)
{
    arma::uvec fd = arma::sort(freq_detected);
    arma::uvec td = arma::sort(time_detected);
    require_subset(fd, alloc.rue_freq, "estimate_clean_set(freq)");
    require_subset(td, alloc.rue_time, "estimate_clean_set(time)");
    CleanSet cs;
    cs.freq = set_difference(alloc.rue_freq, fd);
    cs.time = set_difference(alloc.rue_time, td);
    return cs;
}

namespace {

// Integrand of P(gamma_(n) > gamma_(1) beta) after integrating out the
// maximum analytically:
//   P = n * int f(x) [ (1 - F(x))^(n-1) - (F(beta x) - F(x))^(n-1) ] dx
// with f, F the unit-scale Gamma(shape) density and distribution. All
// pieces are evaluated through (log-)incomplete-gamma calls, and the
// inner difference uses the upper or lower tail, whichever avoids
// cancellation.
double fwer_integrand(double x, double beta, double shape, double n)
{
    const double f = boost::math::gamma_p_derivative(shape, x);
    if (f <= 0.0)
        return 0.0;
    const double survival = boost::math::gamma_q(shape, x);
    double mid;
    if (boost::math::gamma_p(shape, x) < 0.5)
        mid = boost::math::gamma_p(shape, beta * x) - boost::math::gamma_p(shape, x);
    else
        mid = boost::math::gamma_q(shape, x) - boost::math::gamma_q(shape, beta * x);
    mid = std::max(mid, 0.0);
    return f * (std::pow(survival, n - 1.0) - std::pow(mid, n - 1.0));
}

} // namespace

double fwer_theoretical(double beta, arma::uword shape, arma::uword n)
{
    if (shape < 1)
        throw std::invalid_argument("fwer_theoretical: shape must be >= 1");
    if (n < 2)
        throw std::invalid_argument("fwer_theoretical: need at least two statistics");
    if (beta < 1.0)
        throw std::invalid_argument("fwer_theoretical: beta must be >= 1");

    const double rho = static_cast<double>(shape);
    const double nn = static_cast<double>(n);
    const double lo = std::max(0.0, rho - 10.0 * std::sqrt(rho));
    const double hi = rho + 10.0 * std::sqrt(rho);

    double error = 0.0;
    const double value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        [&](double x) { return fwer_integrand(x, beta, rho, nn); }, lo, hi, 12, 1e-10,
        &error);
    if (!(std::isfinite(value)) || error > 1e-6 * std::max(value, 1e-12))
        throw numerical_error("fwer_theoretical: quadrature did not converge", error);
    return std::clamp(nn * value, 0.0, 1.0);
}

double calibrate_beta(double delta, arma::uword shape, arma::uword n, double tol)
{
    if (delta <= 0.0 || delta >= 1.0)
        throw std::invalid_argument("calibrate_beta: delta must be in (0, 1)");
    if (tol <= 0.0)
        throw std::invalid_argument("calibrate_beta: tol must be positive");

    double lo = 1.0;
    double hi = 2.0;
    while (fwer_theoretical(hi, shape, n) > delta) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e6)
            throw numerical_error("calibrate_beta: no feasible beta found", hi);
    }
    // fwer is monotone nonincreasing in beta; bisect to the requested width.
    while (hi - lo > 0.1 * tol) {
        const double mid = 0.5 * (lo + hi);
        if (fwer_theoretical(mid, shape, n) <= delta)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

double p_value(double z, arma::uword shape, arma::uword n)
{
    if (z < 1.0)
        throw std::invalid_argument("p_value: the ratio statistic satisfies z >= 1");
    if (shape < 1 || n < 2)
        throw std::invalid_argument("p_value: need shape >= 1 and n >= 2");

    const double rho = static_cast<double>(shape);
    const double nn = static_cast<double>(n);
    // p = (n-1) int_0^1 (1 - F(z F^{-1}(1-w))) w^{n-2} dw; the inverse CDF at
    // 1-w is evaluated through the upper-tail inverse for stability.
    double error = 0.0;
    const double value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        [&](double w) {
            const double x = boost::math::gamma_q_inv(rho, w);
            return boost::math::gamma_q(rho, z * x) * std::pow(w, nn - 2.0);
        },
        0.0, 1.0, 12, 1e-10, &error);
    if (!std::isfinite(value))
        throw numerical_error("p_value: quadrature failed", error);
    return std::clamp((nn - 1.0) * value, 0.0, 1.0);
}

MonteCarloEstimate fwer_monte_carlo(double beta, arma::uword shape, arma::uword n,
                                    arma::uword trials, double scale, Rng& rng)
{
    if (trials == 0)
        throw std::invalid_argument("fwer_monte_carlo: need at least one trial");
    arma::uword hits = 0;
    const double rho = static_cast<double>(shape);
    for (arma::uword t = 0; t < trials; ++t) {
        double mn = arma::datum::inf;
        double mx = 0.0;
        for (arma::uword i = 0; i < n; ++i) {
            const double g = rng.gamma(rho) * scale;
            mn = std::min(mn, g);
            mx = std::max(mx, g);
        }
        if (mx > mn * beta)
            ++hits;
    }
    const double p = static_cast<double>(hits) / static_cast<double>(trials);
    const double se = std::sqrt(std::max(p * (1.0 - p), 1e-300) / static_cast<double>(trials));
    return {p, se};
}

DetectionResult detect_interference(const ReceivedTensor& y, const ResourceAllocation& alloc,
                                    const DetectionConfig& freq_cfg,
                                    const DetectionConfig& time_cfg)
{
    freq_cfg.validate();
    time_cfg.validate();
    DetectionResult r;
    r.freq_stats = subcarrier_powers(y, alloc);
    r.time_stats = slot_powers(y, alloc);
    r.detected_freq = threshold_detect(r.freq_stats, freq_cfg.kappa, freq_cfg.beta);
    r.detected_time = threshold_detect(r.time_stats, time_cfg.kappa, time_cfg.beta);
    const CleanSet cs = estimate_clean_set(alloc, r.detected_freq, r.detected_time);
    r.clean_freq = cs.freq;
    r.clean_time = cs.time;
    return r;
}

} // namespace ofdmsense
