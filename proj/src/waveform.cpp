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

#include "ofdmsense/waveform.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "ofdmsense/common.hpp"

namespace ofdmsense {

arma::uword ResourceAllocation::user_resource_count(arma::uword user) const
{
    if (user == 0)
        return rue_resource_count();
    return iue_freq.at(user - 1).n_elem * iue_time.at(user - 1).n_elem;
}

namespace {

bool contains(const arma::uvec& sorted, arma::uword v)
{
    return std::binary_search(sorted.begin(), sorted.end(), v);
}

} // namespace

bool ResourceAllocation::rue_uses(arma::uword n, arma::uword t) const
{
    return contains(rue_freq, n) && contains(rue_time, t);
}

bool ResourceAllocation::iue_uses(arma::uword i, arma::uword n, arma::uword t) const
{
    return contains(iue_freq.at(i), n) && contains(iue_time.at(i), t);
}

bool ResourceAllocation::interfered(arma::uword n, arma::uword t) const
{
    for (arma::uword i = 0; i < num_iue(); ++i)
        if (iue_uses(i, n, t))
            return true;
    return false;
}

arma::uvec ResourceAllocation::clean_freq() const
{
    std::vector<arma::uword> out;
    for (arma::uword n : rue_freq) {
        bool hit = false;
        for (const auto& f : iue_freq)
            if (contains(f, n)) {
                hit = true;
                break;
            }
        if (!hit)
            out.push_back(n);
    }
    return arma::uvec(out);
}

arma::uvec ResourceAllocation::clean_time() const
{
    std::vector<arma::uword> out;
    for (arma::uword t : rue_time) {
        bool hit = false;
        for (const auto& f : iue_time)
            if (contains(f, t)) {
                hit = true;
                break;
            }
        if (!hit)
            out.push_back(t);
    }
    return arma::uvec(out);
}

arma::uword ResourceAllocation::clean_count() const
{
    // Omega = Omega^(0) minus the union of the iUE products; with full
    // product sets this is |Omega^(0)| minus the interfered cells.
    arma::uword hit = 0;
    for (arma::uword n : rue_freq)
        for (arma::uword t : rue_time)
            if (interfered(n, t))
                ++hit;
    return rue_resource_count() - hit;
}

void ResourceAllocation::validate() const
{
    auto check = [&](const arma::uvec& v, arma::uword bound, const char* what) {
        if (v.n_elem == 0)
            throw allocation_error(std::string(what) + ": empty set");
        if (!v.is_sorted("strictascend"))
            throw allocation_error(std::string(what) + ": indices must be strictly ascending");
        if (v.max() >= bound)
            throw allocation_error(std::string(what) + ": index out of range");
    };
    check(rue_freq, num_subcarriers, "rue_freq");
    check(rue_time, num_symbols, "rue_time");
    if (iue_freq.size() != iue_time.size())
        throw allocation_error("per-iUE frequency/time set count mismatch");
    for (arma::uword i = 0; i < num_iue(); ++i) {
        check(iue_freq[i], num_subcarriers, "iue_freq");
        check(iue_time[i], num_symbols, "iue_time");
    }
}

ResourceAllocation allocate_resources(arma::uword num_subcarriers, arma::uword num_symbols,
                                      arma::uword n_rue, arma::uword n_iue,
                                      arma::uword n_overlap, Rng& rng)
{
    if (n_overlap > std::min(n_rue, n_iue))
        throw allocation_error("overlap exceeds a user's subcarrier count");
    if (n_rue + n_iue - n_overlap > num_subcarriers)
        throw allocation_error("requested subcarriers exceed the grid");
    if (n_rue == 0 || n_iue == 0)
        throw allocation_error("each user needs at least one subcarrier");

    ResourceAllocation alloc;
    alloc.num_subcarriers = num_subcarriers;
    alloc.num_symbols = num_symbols;
    alloc.rue_freq = arma::sort(rng.sample_without_replacement(num_subcarriers, n_rue));
    alloc.rue_time = arma::regspace<arma::uvec>(0, num_symbols - 1);

    // iUE: n_overlap subcarriers from the rUE set, the rest from its complement.
    arma::uvec shared = rng.sample_without_replacement(n_rue, n_overlap);
    std::vector<arma::uword> iue;
    for (arma::uword k : shared)
        iue.push_back(alloc.rue_freq(k));

    std::vector<arma::uword> complement;
    complement.reserve(num_subcarriers - n_rue);
    arma::uword pos = 0;
    for (arma::uword n = 0; n < num_subcarriers; ++n) {
        if (pos < n_rue && alloc.rue_freq(pos) == n)
            ++pos;
        else
            complement.push_back(n);
    }
    arma::uvec extra = rng.sample_without_replacement(complement.size(), n_iue - n_overlap);
    for (arma::uword k : extra)
        iue.push_back(complement[k]);

    arma::uvec iue_set(iue);
    alloc.iue_freq.push_back(arma::sort(iue_set));
    alloc.iue_time.push_back(arma::regspace<arma::uvec>(0, num_symbols - 1));
    alloc.validate();
    return alloc;
}

arma::cx_vec steering_vector(double theta, arma::uword n_antennas)
{
    if (n_antennas < 1)
        throw std::invalid_argument("steering_vector: need at least one antenna");
    arma::cx_vec a(n_antennas);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n_antennas));
    const double phase_step = M_PI * std::sin(theta);
    for (arma::uword k = 0; k < n_antennas; ++k)
        a(k) = std::polar(scale, phase_step * static_cast<double>(k));
    return a;
}

arma::cx_mat steering_matrix(const arma::vec& thetas, arma::uword n_antennas)
{
    arma::cx_mat A(n_antennas, thetas.n_elem);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n_antennas));
    for (arma::uword g = 0; g < thetas.n_elem; ++g) {
        const double phase_step = M_PI * std::sin(thetas(g));
        for (arma::uword k = 0; k < n_antennas; ++k)
            A(k, g) = std::polar(scale, phase_step * static_cast<double>(k));
    }
    return A;
}

std::complex<double> delay_response(arma::uword subcarrier, double tau_s, double delta_f_hz)
{
    return std::polar(1.0, -2.0 * M_PI * delta_f_hz * static_cast<double>(subcarrier) * tau_s);
}

TransmitGrid synthesize_transmit(const ResourceAllocation& alloc,
                                 const std::vector<double>& tx_power_w,
                                 arma::uword n_antennas, Rng& rng)
{
    alloc.validate();
    if (tx_power_w.size() != alloc.num_iue() + 1)
        throw std::invalid_argument("synthesize_transmit: one power per user expected");

    const double m0 = static_cast<double>(alloc.rue_resource_count());
    TransmitGrid tx;
    tx.symbol_variance.set_size(tx_power_w.size());

    for (arma::uword u = 0; u < tx_power_w.size(); ++u) {
        // The paper normalizes every user by the rUE resource count M^(0).
        const double var = tx_power_w[u] / (m0 * static_cast<double>(n_antennas));
        tx.symbol_variance(u) = var;
        arma::cx_cube grid(n_antennas, alloc.num_subcarriers, alloc.num_symbols,
                           arma::fill::zeros);
        const arma::uvec& freqs = (u == 0) ? alloc.rue_freq : alloc.iue_freq[u - 1];
        const arma::uvec& times = (u == 0) ? alloc.rue_time : alloc.iue_time[u - 1];
        if (var > 0.0) {
            for (arma::uword t : times)
                for (arma::uword n : freqs)
                    for (arma::uword k = 0; k < n_antennas; ++k)
                        grid(k, n, t) = rng.cnormal(var);
        }
        tx.user_symbols.push_back(std::move(grid));
    }
    return tx;
}

ReceivedTensor synthesize_received(const ChannelParams& params, const TransmitGrid& tx,
                                   const ResourceAllocation& alloc, double noise_power_w,
                                   double delta_f_hz, Rng& rng)
{
    alloc.validate();
    const arma::uword n_users = tx.user_symbols.size();
    if (n_users != alloc.num_iue() + 1)
        throw std::invalid_argument("synthesize_received: grid/allocation user mismatch");
    const arma::uword n_ant = tx.user_symbols[0].n_rows;
    const arma::uword n_obj = params.mono_gains.n_elem;

    ReceivedTensor out;
    out.allocation = alloc;
    out.samples.set_size(n_ant, alloc.num_subcarriers, alloc.num_symbols);
    for (arma::uword t = 0; t < alloc.num_symbols; ++t)
        for (arma::uword n = 0; n < alloc.num_subcarriers; ++n)
            for (arma::uword k = 0; k < n_ant; ++k)
                out.samples(k, n, t) = rng.cnormal(noise_power_w);

    // One propagation path: gain * <a(dep)^T, x> * d_n(delay) * a(arr).
    struct Path {
        std::complex<double> gain;
        double departure, arrival, delay;
    };
    for (arma::uword u = 0; u < n_users; ++u) {
        std::vector<Path> paths;
        if (u == 0) {
            for (arma::uword l = 0; l < n_obj; ++l)
                paths.push_back({params.mono_gains(l), params.aoa(l), params.aoa(l),
                                 2.0 * params.toa(l)});
        } else {
            const arma::uword i = u - 1;
            paths.push_back({params.direct_gains(i), params.aod(i), params.aoa(i),
                             params.toa(i)});
            for (arma::uword l = 0; l < n_obj; ++l) {
                if (l == i)
                    continue;
                paths.push_back({params.cross_gains(i, l), params.aod_cross(i, l),
                                 params.aoa(l), params.toa_cross(i, l)});
            }
        }
        const arma::uvec& freqs = (u == 0) ? alloc.rue_freq : alloc.iue_freq[u - 1];
        const arma::uvec& times = (u == 0) ? alloc.rue_time : alloc.iue_time[u - 1];
        const arma::cx_cube& x = tx.user_symbols[u];

        for (const Path& path : paths) {
            if (std::abs(path.gain) == 0.0)
                continue;
            const arma::cx_vec a_dep = steering_vector(path.departure, n_ant);
            const arma::cx_vec a_arr = steering_vector(path.arrival, n_ant);
            for (arma::uword n : freqs) {
                const std::complex<double> phase =
                    path.gain * delay_response(n, path.delay, delta_f_hz);
                for (arma::uword t : times) {
                    const std::complex<double> beam =
                        arma::dot(a_dep, arma::cx_vec(x.slice(t).col(n)));
                    out.samples.slice(t).col(n) += (phase * beam) * a_arr;
                }
            }
        }
    }
    return out;
}

void dump_realization(const ReceivedTensor& tensor, const std::string& path_prefix)
{
    const arma::uword n_ant = tensor.num_antennas();
    const arma::uword n_sub = tensor.num_subcarriers();
    const arma::uword n_sym = tensor.num_symbols();

    std::ofstream bin(path_prefix + ".tensor.bin", std::ios::binary);
    if (!bin)
        throw std::runtime_error("cannot write " + path_prefix + ".tensor.bin");
    for (arma::uword n = 0; n < n_sub; ++n)
        for (arma::uword t = 0; t < n_sym; ++t)
            for (arma::uword k = 0; k < n_ant; ++k) {
                const std::complex<double> v = tensor.samples(k, n, t);
                const double re = v.real(), im = v.imag();
                bin.write(reinterpret_cast<const char*>(&re), sizeof(double));
                bin.write(reinterpret_cast<const char*>(&im), sizeof(double));
            }

    std::ofstream masks(path_prefix + ".masks.csv");
    masks << "user,kind,index\n";
    auto emit = [&](arma::uword user, const char* kind, const arma::uvec& v) {
        for (arma::uword i : v)
            masks << user << "," << kind << "," << i << "\n";
    };
    emit(0, "freq", tensor.allocation.rue_freq);
    emit(0, "time", tensor.allocation.rue_time);
    for (arma::uword i = 0; i < tensor.allocation.num_iue(); ++i) {
        emit(i + 1, "freq", tensor.allocation.iue_freq[i]);
        emit(i + 1, "time", tensor.allocation.iue_time[i]);
    }

    nlohmann::json meta;
    meta["num_subcarriers"] = n_sub;
    meta["num_symbols"] = n_sym;
    meta["num_antennas"] = n_ant;
    meta["layout"] = "row-major (n, t, k), interleaved re/im float64";
    std::ofstream(path_prefix + ".meta.json") << meta.dump(2) << "\n";
}

} // namespace ofdmsense
