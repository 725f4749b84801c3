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

#include "ofdmsense/crlb.hpp"

#include <cmath>
#include <map>

#include "ofdmsense/common.hpp"

namespace ofdmsense {

ParamVector ParamVector::from_channel(const ChannelParams& ch)
{
    ParamVector p;
    p.delays = ch.toa;
    p.angles = ch.aoa;
    p.mono_gains = ch.mono_gains;
    p.direct_gains = ch.direct_gains;
    p.cross_gains = ch.cross_gains;
    p.aod = ch.aod;
    p.aod_cross = ch.aod_cross;
    p.toa_cross_offset = ch.toa_cross;
    for (arma::uword i = 0; i < p.num_iue(); ++i)
        for (arma::uword l = 0; l < p.num_objects(); ++l)
            if (l != i)
                p.toa_cross_offset(i, l) -= ch.toa(l);
    return p;
}

arma::uword ParamVector::num_gains() const
{
    const arma::uword n_obj = num_objects();
    const arma::uword n_iue = num_iue();
    return n_obj + n_iue + n_iue * (n_obj - 1);
}

arma::vec ParamVector::flatten() const
{
    const arma::uword n_obj = num_objects();
    const arma::uword g = num_gains();
    arma::vec flat(dim());
    flat.subvec(0, n_obj - 1) = delays;
    flat.subvec(n_obj, 2 * n_obj - 1) = angles;
    arma::uword slot = 0;
    auto put = [&](const arma::cx_double& v) {
        flat(2 * n_obj + slot) = v.real();
        flat(2 * n_obj + g + slot) = v.imag();
        ++slot;
    };
    for (arma::uword l = 0; l < n_obj; ++l)
        put(mono_gains(l));
    for (arma::uword i = 0; i < num_iue(); ++i)
        put(direct_gains(i));
    for (arma::uword i = 0; i < num_iue(); ++i)
        for (arma::uword l = 0; l < n_obj; ++l)
            if (l != i)
                put(cross_gains(i, l));
    return flat;
}

void ParamVector::assign_flat(const arma::vec& flat)
{
    if (flat.n_elem != dim())
        throw std::invalid_argument("ParamVector::assign_flat: dimension mismatch");
    const arma::uword n_obj = num_objects();
    const arma::uword g = num_gains();
    delays = flat.subvec(0, n_obj - 1);
    angles = flat.subvec(n_obj, 2 * n_obj - 1);
    arma::uword slot = 0;
    auto get = [&]() {
        arma::cx_double v(flat(2 * n_obj + slot), flat(2 * n_obj + g + slot));
        ++slot;
        return v;
    };
    for (arma::uword l = 0; l < n_obj; ++l)
        mono_gains(l) = get();
    for (arma::uword i = 0; i < num_iue(); ++i)
        direct_gains(i) = get();
    for (arma::uword i = 0; i < num_iue(); ++i)
        for (arma::uword l = 0; l < n_obj; ++l)
            if (l != i)
                cross_gains(i, l) = get();
}

arma::cx_vec mean_vector(arma::uword n, arma::uword t, const ParamVector& p,
                         const arma::cx_cube& rue_symbols, double delta_f_hz)
{
    const arma::uword n_ant = rue_symbols.n_rows;
    const arma::cx_vec x = rue_symbols.slice(t).col(n);
    arma::cx_vec mu(n_ant, arma::fill::zeros);
    for (arma::uword l = 0; l < p.num_objects(); ++l) {
        const arma::cx_vec a = steering_vector(p.angles(l), n_ant);
        mu += p.mono_gains(l) * arma::dot(a, x) *
              delay_response(n, 2.0 * p.delays(l), delta_f_hz) * a;
    }
    return mu;
}

arma::cx_mat covariance_matrix(arma::uword n, arma::uword t, const ParamVector& p,
                               const ResourceAllocation& alloc, const arma::vec& symbol_variance,
                               double noise_power_w, arma::uword n_antennas, double delta_f_hz)
{
    arma::cx_mat sigma(n_antennas, n_antennas, arma::fill::eye);
    sigma *= noise_power_w;

    for (arma::uword i = 0; i < p.num_iue(); ++i) {
        if (!alloc.iue_uses(i, n, t))
            continue;
        const double var = symbol_variance(i + 1);
        if (var <= 0.0)
            continue;
        // All paths of iUE i: direct plus one scatter path per other object.
        // The interference covariance is the full quadratic form over this
        // path list, which expands to the diagonal, V and W terms.
        std::vector<std::complex<double>> gain;
        std::vector<arma::cx_vec> dep, arr;
        std::vector<double> delay;
        gain.push_back(p.direct_gains(i));
        dep.push_back(steering_vector(p.aod(i), n_antennas));
        arr.push_back(steering_vector(p.angles(i), n_antennas));
        delay.push_back(p.delays(i));
        for (arma::uword l = 0; l < p.num_objects(); ++l) {
            if (l == i)
                continue;
            gain.push_back(p.cross_gains(i, l));
            dep.push_back(steering_vector(p.aod_cross(i, l), n_antennas));
            arr.push_back(steering_vector(p.angles(l), n_antennas));
            delay.push_back(p.delays(l) + p.toa_cross_offset(i, l));
        }
        for (arma::uword a = 0; a < gain.size(); ++a) {
            for (arma::uword b = 0; b < gain.size(); ++b) {
                const std::complex<double> weight =
                    gain[a] * std::conj(gain[b]) * arma::cdot(dep[b], dep[a]) *
                    std::polar(1.0, -2.0 * M_PI * delta_f_hz * static_cast<double>(n) *
                                        (delay[a] - delay[b]));
                sigma += var * weight * (arr[a] * arr[b].t());
            }
        }
    }
    return 0.5 * (sigma + sigma.t());
}

namespace {

// d a(theta) / d theta, elementwise j pi cos(theta) k a_k(theta).
arma::cx_vec steering_derivative(double theta, arma::uword n_ant)
{
    arma::cx_vec a = steering_vector(theta, n_ant);
    const double c = M_PI * std::cos(theta);
    for (arma::uword k = 0; k < n_ant; ++k)
        a(k) *= std::complex<double>(0.0, c * static_cast<double>(k));
    return a;
}

// Analytic mean derivatives, one column per flat parameter (columns for
// interference-side gains stay zero).
arma::cx_mat mean_jacobian(arma::uword n, arma::uword t, const ParamVector& p,
                           const arma::cx_cube& rue_symbols, double delta_f_hz)
{
    const arma::uword n_ant = rue_symbols.n_rows;
    const arma::uword n_obj = p.num_objects();
    const arma::uword g = p.num_gains();
    const arma::cx_vec x = rue_symbols.slice(t).col(n);
    arma::cx_mat jac(n_ant, p.dim(), arma::fill::zeros);

    for (arma::uword l = 0; l < n_obj; ++l) {
        const arma::cx_vec a = steering_vector(p.angles(l), n_ant);
        const arma::cx_vec da = steering_derivative(p.angles(l), n_ant);
        const std::complex<double> dn = delay_response(n, 2.0 * p.delays(l), delta_f_hz);
        const std::complex<double> beam = arma::dot(a, x);
        const arma::cx_vec term = p.mono_gains(l) * beam * dn * a;

        // delay: d/d tau of d_n(2 tau) brings down -j 4 pi delta_f n
        jac.col(l) = term * std::complex<double>(
                                0.0, -4.0 * M_PI * delta_f_hz * static_cast<double>(n));
        // angle: product rule over the transmit and receive responses
        jac.col(n_obj + l) =
            p.mono_gains(l) * dn * (arma::dot(da, x) * a + beam * da);
        // gain real/imag parts (mono gains are the first g-block entries)
        const arma::cx_vec unit = beam * dn * a;
        jac.col(2 * n_obj + l) = unit;
        jac.col(2 * n_obj + g + l) = unit * std::complex<double>(0.0, 1.0);
    }
    return jac;
}

} // namespace

arma::umat rue_resources(const ResourceAllocation& alloc)
{
    arma::umat r(2, alloc.rue_resource_count());
    arma::uword c = 0;
    for (arma::uword n : alloc.rue_freq)
        for (arma::uword t : alloc.rue_time)
            r.col(c++) = arma::uvec{n, t};
    return r;
}

arma::umat clean_resources(const ResourceAllocation& alloc)
{
    std::vector<arma::uword> ns, ts;
    for (arma::uword n : alloc.rue_freq)
        for (arma::uword t : alloc.rue_time)
            if (!alloc.interfered(n, t)) {
                ns.push_back(n);
                ts.push_back(t);
            }
    arma::umat r(2, ns.size());
    for (arma::uword c = 0; c < ns.size(); ++c)
        r.col(c) = arma::uvec{ns[c], ts[c]};
    return r;
}

arma::mat fim(const ParamVector& params, const arma::umat& resources,
              const arma::cx_cube& rue_symbols, const ResourceAllocation& alloc,
              const arma::vec& symbol_variance, double noise_power_w, double delta_f_hz,
              const FimSteps& steps)
{
    const arma::uword dim = params.dim();
    arma::mat fisher(dim, dim, arma::fill::zeros);
    if (resources.n_cols == 0)
        return fisher;
    if (resources.n_rows != 2)
        throw std::invalid_argument("fim: resources must be a 2 x M matrix of (n, t)");

    const arma::uword n_ant = rue_symbols.n_rows;
    const arma::uword n_obj = params.num_objects();
    const arma::uword g = params.num_gains();

    // Indices of parameters the covariance depends on: delays, angles and the
    // interference-side (direct + cross) gain parts.
    std::vector<arma::uword> cov_params;
    for (arma::uword l = 0; l < 2 * n_obj; ++l)
        cov_params.push_back(l);
    for (arma::uword s = n_obj; s < g; ++s) {
        cov_params.push_back(2 * n_obj + s);     // real part
        cov_params.push_back(2 * n_obj + g + s); // imaginary part
    }
    auto step_of = [&](arma::uword idx) {
        if (idx < n_obj)
            return steps.delay_s;
        if (idx < 2 * n_obj)
            return steps.angle_rad;
        return steps.gain;
    };

    // The covariance varies only with the subcarrier and the set of iUEs
    // hitting the resource, so cache its inverse and derivatives per key.
    struct CovCache {
        arma::cx_mat inv;
        std::vector<arma::cx_mat> sens; // inv * dSigma/dp for cov_params
        bool interfered = false;
    };
    std::map<std::pair<arma::uword, arma::uword>, CovCache> cache;
    const arma::vec flat0 = params.flatten();

    for (arma::uword c = 0; c < resources.n_cols; ++c) {
        const arma::uword n = resources(0, c);
        const arma::uword t = resources(1, c);

        arma::uword mask = 0;
        for (arma::uword i = 0; i < params.num_iue(); ++i)
            if (alloc.iue_uses(i, n, t))
                mask |= (1u << i);

        auto key = std::make_pair(n, mask);
        auto it = cache.find(key);
        if (it == cache.end()) {
            CovCache entry;
            entry.interfered = (mask != 0);
            const arma::cx_mat sigma = covariance_matrix(n, t, params, alloc, symbol_variance,
                                                         noise_power_w, n_ant, delta_f_hz);
            if (!arma::inv_sympd(entry.inv, sigma))
                throw numerical_error("fim: covariance not positive definite");
            if (entry.interfered) {
                ParamVector pert = params;
                for (arma::uword k = 0; k < cov_params.size(); ++k) {
                    const arma::uword idx = cov_params[k];
                    const double h = step_of(idx);
                    arma::vec flat = flat0;
                    flat(idx) += h;
                    pert.assign_flat(flat);
                    const arma::cx_mat up = covariance_matrix(
                        n, t, pert, alloc, symbol_variance, noise_power_w, n_ant, delta_f_hz);
                    flat(idx) -= 2.0 * h;
                    pert.assign_flat(flat);
                    const arma::cx_mat dn_ = covariance_matrix(
                        n, t, pert, alloc, symbol_variance, noise_power_w, n_ant, delta_f_hz);
                    entry.sens.push_back(entry.inv * ((up - dn_) / (2.0 * h)));
                }
            }
            it = cache.emplace(key, std::move(entry)).first;
        }
        const CovCache& cov = it->second;

        // Mean term: 2 Re{ J^H Sigma^-1 J }.
        const arma::cx_mat jac = mean_jacobian(n, t, params, rue_symbols, delta_f_hz);
        fisher += 2.0 * arma::real(jac.t() * cov.inv * jac);

        // Covariance term: Tr(Sigma^-1 dSigma_i Sigma^-1 dSigma_j).
        if (cov.interfered) {
            for (arma::uword a = 0; a < cov_params.size(); ++a) {
                for (arma::uword b = a; b < cov_params.size(); ++b) {
                    const double v =
                        std::real(arma::accu(cov.sens[a] % arma::strans(cov.sens[b])));
                    fisher(cov_params[a], cov_params[b]) += v;
                    if (a != b)
                        fisher(cov_params[b], cov_params[a]) += v;
                }
            }
        }
    }
    return 0.5 * (fisher + fisher.t());
}

CrlbReport bounds(const arma::mat& fisher, arma::uword num_iue, arma::uword num_sp)
{
    const arma::uword n_obj = num_iue + num_sp;
    const arma::uword dim = fisher.n_rows;
    if (fisher.n_cols != dim || dim < 2 * n_obj)
        throw std::invalid_argument("bounds: information matrix size mismatch");

    CrlbReport rep;
    rep.fim = fisher;

    // Parameters with no information at all (e.g. interference gains on a
    // clean-only resource set) are excluded up front.
    const arma::uvec active = arma::find(fisher.diag() > 0.0);
    for (arma::uword l = 0; l < 2 * n_obj; ++l)
        if (!arma::any(active == l))
            throw numerical_error("bounds: no information about an interest parameter");

    const arma::mat fa = fisher.submat(active, active);
    const arma::vec scale = 1.0 / arma::sqrt(fa.diag());
    const arma::mat fs = fa % (scale * scale.t());

    arma::vec eigval;
    arma::mat eigvec;
    if (!arma::eig_sym(eigval, eigvec, fs))
        throw numerical_error("bounds: eigendecomposition failed");

    const double gate = eigval.max() * 1e-12;
    arma::mat ks(fs.n_rows, fs.n_cols, arma::fill::zeros);
    double kept_min = arma::datum::inf;
    for (arma::uword i = 0; i < eigval.n_elem; ++i) {
        if (eigval(i) <= gate) {
            // A discarded direction must not involve the interest block.
            double overlap = 0.0;
            for (arma::uword r = 0; r < active.n_elem; ++r)
                if (active(r) < 2 * n_obj)
                    overlap += eigvec(r, i) * eigvec(r, i);
            if (overlap > 1e-10)
                throw numerical_error("bounds: interest parameters not identifiable",
                                      eigval.max() / std::max(eigval(i), 1e-300));
            continue;
        }
        kept_min = std::min(kept_min, eigval(i));
        ks += (eigvec.col(i) * eigvec.col(i).t()) / eigval(i);
    }
    rep.condition = eigval.max() / kept_min;

    rep.crlb.zeros(dim, dim);
    rep.crlb.submat(active, active) = ks % (scale * scale.t());

    rep.deb.set_size(n_obj);
    rep.aeb.set_size(n_obj);
    for (arma::uword l = 0; l < n_obj; ++l) {
        const double dv = rep.crlb(l, l);
        const double av = rep.crlb(n_obj + l, n_obj + l);
        if (dv <= 0.0 || av <= 0.0)
            throw numerical_error("bounds: nonpositive variance bound", rep.condition);
        rep.deb(l) = std::sqrt(dv);
        rep.aeb(l) = std::sqrt(av);
    }
    return rep;
}

} // namespace ofdmsense
