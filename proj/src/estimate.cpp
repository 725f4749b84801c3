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

#include "ofdmsense/estimate.hpp"

#include <algorithm>
#include <cmath>

#include "ofdmsense/assignment.hpp"
#include "ofdmsense/common.hpp"
#include "ofdmsense/waveform.hpp"

namespace ofdmsense {

arma::vec AngleGrid::sample() const
{
    const double step = (hi - lo) / static_cast<double>(points);
    arma::vec g(points);
    for (arma::uword i = 0; i < points; ++i)
        g(i) = lo + step * (static_cast<double>(i) + 0.5);
    return g;
}

double circular_angle_cost(double a, double b)
{
    const double d = a - b;
    const double alt = std::abs(d) - 2.0 * M_PI;
    return std::min(d * d, alt * alt);
}

double circular_angle_error(double a, double b)
{
    return wrap_angle(a - b);
}

// ---------------------------------------------------------------- MUSIC

namespace {

// 1 / ||U_n^H a(theta)||^2 over a set of angles.
arma::vec music_pseudo(const arma::cx_mat& noise_basis, const arma::vec& angles)
{
    const arma::cx_mat A = steering_matrix(angles, noise_basis.n_rows);
    const arma::cx_mat P = noise_basis.t() * A;
    arma::vec denom = arma::sum(arma::square(arma::abs(P)), 0).t();
    denom.transform([](double v) { return std::max(v, 1e-300); });
    return 1.0 / denom;
}

} // namespace

AngleSpectrum music_estimate(const arma::cx_mat& snapshots, arma::uword num_signals,
                             const AngleGrid& grid, const RefineConfig& refine)
{
    const arma::uword n_ant = snapshots.n_rows;
    if (num_signals >= n_ant)
        throw std::invalid_argument("music_estimate: need num_signals < number of antennas");
    if (snapshots.n_cols < n_ant)
        throw std::invalid_argument("music_estimate: need at least N_u snapshots");

    arma::cx_mat gram = snapshots * snapshots.t();
    gram = 0.5 * (gram + gram.t());

    arma::vec eigval;
    arma::cx_mat eigvec;
    if (!arma::eig_sym(eigval, eigvec, gram))
        throw numerical_error("music_estimate: eigendecomposition failed");
    const arma::cx_mat noise_basis = eigvec.head_cols(n_ant - num_signals);

    AngleSpectrum out;
    out.grid = grid.sample();
    out.pseudo = music_pseudo(noise_basis, out.grid);
    if (num_signals == 0)
        return out;

    // Interior local maxima; ties resolved toward the lower index.
    std::vector<arma::uword> maxima;
    for (arma::uword j = 1; j + 1 < out.grid.n_elem; ++j)
        if (out.pseudo(j) > out.pseudo(j - 1) && out.pseudo(j) >= out.pseudo(j + 1))
            maxima.push_back(j);
    if (maxima.size() < num_signals)
        throw estimation_error("music_estimate: fewer spectrum peaks than signals");

    std::stable_sort(maxima.begin(), maxima.end(), [&](arma::uword a, arma::uword b) {
        return out.pseudo(a) > out.pseudo(b);
    });
    maxima.resize(num_signals);

    const double coarse_step = (grid.hi - grid.lo) / static_cast<double>(grid.points);
    out.peak_angles.set_size(num_signals);
    out.peak_values.set_size(num_signals);
    for (arma::uword p = 0; p < num_signals; ++p) {
        double center = out.grid(maxima[p]);
        double window = coarse_step;
        double value = out.pseudo(maxima[p]);
        for (arma::uword round = 0; round < refine.rounds; ++round) {
            const double lo = std::max(grid.lo, center - window);
            const double hi = std::min(grid.hi, center + window);
            const arma::vec local = arma::linspace(lo, hi, refine.points);
            const arma::vec pv = music_pseudo(noise_basis, local);
            const arma::uword best = pv.index_max();
            center = local(best);
            value = pv(best);
            window /= refine.shrink;
        }
        out.peak_angles(p) = center;
        out.peak_values(p) = value;
    }

    // Strongest peak first (refined values may reorder the coarse ranking).
    const arma::uvec order = arma::stable_sort_index(out.peak_values, "descend");
    out.peak_angles = out.peak_angles(order);
    out.peak_values = out.peak_values(order);
    return out;
}

// ------------------------------------------------------------------ OMP

namespace {

// Separable evaluation of atom correlations over an (angle x delay) grid.
//
// For atom h(theta, tau) = vec[ (a(theta)^T x_m) d_{n_m}(2 tau) a(theta) ]
// and any stacked observation R, the correlation h^H R factorizes into a
// per-angle part and a per-subcarrier delay transform, so a full grid costs
// two small matrix products instead of one inner product per atom.
class AtomCorrelator {
  public:
    AtomCorrelator(const arma::cx_mat& tx, const arma::uvec& subcarrier_of_col,
                   double delta_f_hz)
        : tx_(tx), delta_f_(delta_f_hz)
    {
        freqs_ = arma::unique(subcarrier_of_col);
        group_.zeros(tx.n_cols, freqs_.n_elem);
        for (arma::uword m = 0; m < subcarrier_of_col.n_elem; ++m) {
            const arma::uvec hit = arma::find(freqs_ == subcarrier_of_col(m), 1);
            group_(m, hit(0)) = 1.0;
        }
        subcarrier_of_col_ = subcarrier_of_col;
    }

    arma::uword num_cols() const { return tx_.n_cols; }
    arma::uword num_antennas() const { return tx_.n_rows; }

    // corr(g, d) = h(angle_g, delay_d)^H R; norm2(g) = ||h(angle_g, .)||^2.
    void eval(const arma::vec& angles, const arma::vec& delays, const arma::cx_mat& r,
              arma::cx_mat& corr, arma::vec& norm2) const
    {
        const arma::cx_mat A = steering_matrix(angles, tx_.n_rows);
        const arma::cx_mat U = A.st() * tx_; // a^T x per (angle, column)
        const arma::cx_mat V = A.t() * r;    // a^H r
        const arma::cx_mat Q = (arma::conj(U) % V) * group_;
        arma::cx_mat E(freqs_.n_elem, delays.n_elem);
        for (arma::uword f = 0; f < freqs_.n_elem; ++f) {
            const double w = 4.0 * M_PI * delta_f_ * static_cast<double>(freqs_(f));
            for (arma::uword d = 0; d < delays.n_elem; ++d)
                E(f, d) = std::polar(1.0, w * delays(d));
        }
        corr = Q * E;
        norm2 = arma::sum(arma::square(arma::abs(U)), 1);
    }

    // Materialize one atom as an (N_u x M) matrix.
    arma::cx_mat atom(double angle, double delay) const
    {
        const arma::cx_vec a = steering_vector(angle, tx_.n_rows);
        const arma::cx_rowvec w = a.st() * tx_;
        arma::cx_mat h(tx_.n_rows, tx_.n_cols);
        for (arma::uword m = 0; m < tx_.n_cols; ++m)
            h.col(m) = (w(m) * delay_response(subcarrier_of_col_(m), 2.0 * delay, delta_f_)) * a;
        return h;
    }

  private:
    arma::cx_mat tx_;
    arma::uvec subcarrier_of_col_;
    arma::uvec freqs_;
    arma::mat group_;
    double delta_f_;
};

struct GridPick {
    double angle = 0.0;
    double delay = 0.0;
    double metric = 0.0;
};

// Deterministic argmax (lowest linear index wins on ties) of the
// normalized, optionally deflated correlation metric.
GridPick pick_best(const arma::cx_mat& corr, const arma::vec& norm2,
                   const std::vector<arma::cx_mat>& other_corr, const arma::cx_mat& gram_inv,
                   const arma::vec& angles, const arma::vec& delays)
{
    GridPick best;
    best.metric = -1.0;
    for (arma::uword d = 0; d < delays.n_elem; ++d) {
        for (arma::uword g = 0; g < angles.n_elem; ++g) {
            double den2 = norm2(g);
            if (!other_corr.empty()) {
                std::complex<double> quad(0.0, 0.0);
                for (arma::uword a = 0; a < other_corr.size(); ++a)
                    for (arma::uword b = 0; b < other_corr.size(); ++b)
                        quad += other_corr[a](g, d) * gram_inv(a, b) *
                                std::conj(other_corr[b](g, d));
                den2 -= quad.real();
            }
            if (den2 <= 1e-12 * std::max(norm2(g), 1e-300))
                continue; // atom (numerically) inside the span of the others
            const double metric = std::abs(corr(g, d)) / std::sqrt(den2);
            if (metric > best.metric) {
                best = {angles(g), delays(d), metric};
            }
        }
    }
    return best;
}

arma::vec local_grid(double center, double window, double lo, double hi, arma::uword points)
{
    const double a = std::max(lo, center - window);
    const double b = std::min(hi, center + window);
    return arma::linspace(a, b, points);
}

} // namespace

OmpResult omp_estimate(const arma::cx_mat& snapshots, const arma::cx_mat& tx_symbols,
                       const arma::uvec& subcarrier_of_col, double delta_f_hz,
                       arma::uword num_targets, const OmpConfig& config)
{
    if (snapshots.n_rows != tx_symbols.n_rows || snapshots.n_cols != tx_symbols.n_cols)
        throw std::invalid_argument("omp_estimate: snapshot/tx shape mismatch");
    if (snapshots.n_cols == 0)
        throw std::invalid_argument("omp_estimate: empty estimation resource set");
    if (subcarrier_of_col.n_elem != snapshots.n_cols)
        throw std::invalid_argument("omp_estimate: one subcarrier index per column expected");
    if (num_targets == 0)
        throw std::invalid_argument("omp_estimate: num_targets must be >= 1");
    if (delta_f_hz <= 0.0)
        throw std::invalid_argument("omp_estimate: delta_f must be positive");

    const arma::cx_vec y = arma::vectorise(snapshots);
    if (arma::norm(y) == 0.0)
        throw estimation_error("omp_estimate: zero observation");

    const double delay_max =
        config.delay_max_s > 0.0 ? config.delay_max_s : 1.0 / (4.0 * delta_f_hz);
    const arma::vec angle_grid = config.angle_grid.sample();
    const arma::vec delay_grid = arma::linspace(0.0, delay_max, config.delay_points);
    const double angle_step = angle_grid(1) - angle_grid(0);
    const double delay_step = delay_grid(1) - delay_grid(0);

    AtomCorrelator correlator(tx_symbols, subcarrier_of_col, delta_f_hz);

    OmpResult out;
    std::vector<arma::cx_mat> atoms;           // (N_u x M) form
    arma::cx_mat dictionary(y.n_elem, 0);      // stacked atom columns

    auto least_squares = [&](const arma::cx_mat& psi) -> arma::cx_vec {
        arma::cx_mat gram = psi.t() * psi;
        const arma::cx_vec rhs = psi.t() * y;
        arma::cx_vec coef;
        if (!arma::solve(coef, gram, rhs, arma::solve_opts::no_approx)) {
            gram.diag() += 1e-10 * arma::trace(arma::abs(gram)) /
                           static_cast<double>(gram.n_rows);
            out.warnings.push_back("regularized rank-deficient atom Gram matrix");
            if (!arma::solve(coef, gram, rhs))
                throw numerical_error("omp_estimate: projection solve failed");
        }
        return coef;
    };

    arma::cx_mat residual = snapshots;
    arma::cx_mat corr;
    arma::vec norm2;
    const std::vector<arma::cx_mat> no_deflation;
    const arma::cx_mat empty_gram;

    for (arma::uword it = 0; it < num_targets; ++it) {
        correlator.eval(angle_grid, delay_grid, residual, corr, norm2);
        GridPick pick = pick_best(corr, norm2, no_deflation, empty_gram, angle_grid, delay_grid);
        if (pick.metric <= 0.0)
            throw estimation_error("omp_estimate: residual uncorrelated with dictionary");

        double wa = angle_step, wd = delay_step;
        for (arma::uword round = 0; round < config.refine.rounds; ++round) {
            const arma::vec la = local_grid(pick.angle, wa, config.angle_grid.lo,
                                            config.angle_grid.hi, config.refine.points);
            const arma::vec ld = local_grid(pick.delay, wd, 0.0, delay_max, config.refine.points);
            correlator.eval(la, ld, residual, corr, norm2);
            pick = pick_best(corr, norm2, no_deflation, empty_gram, la, ld);
            wa /= config.refine.shrink;
            wd /= config.refine.shrink;
        }

        out.pairs.push_back({pick.delay, pick.angle});
        atoms.push_back(correlator.atom(pick.angle, pick.delay));
        dictionary.insert_cols(dictionary.n_cols, arma::vectorise(atoms.back()));

        const arma::cx_vec coef = least_squares(dictionary);
        const arma::cx_vec r = y - dictionary * coef;
        out.residual_history.push_back(arma::norm(r));
        residual = arma::reshape(r, snapshots.n_rows, snapshots.n_cols);
    }

    // Cyclic polish: re-refine each pair against the residual of the other
    // atoms, normalizing by the deflated atom norm ||(I - P_others) h||, so
    // the coordinate updates descend the joint least-squares objective.
    for (arma::uword pass = 0; pass < config.max_polish_passes; ++pass) {
        bool moved = false;
        for (arma::uword i = 0; i < out.pairs.size(); ++i) {
            std::vector<arma::cx_mat> other_corr;
            arma::cx_mat gram_inv;
            arma::cx_mat psi_others(y.n_elem, 0);
            for (arma::uword j = 0; j < atoms.size(); ++j)
                if (j != i)
                    psi_others.insert_cols(psi_others.n_cols, arma::vectorise(atoms[j]));

            arma::cx_mat target = snapshots;
            if (psi_others.n_cols > 0) {
                const arma::cx_vec coef = least_squares(psi_others);
                target = arma::reshape(y - psi_others * coef, snapshots.n_rows,
                                       snapshots.n_cols);
                if (!arma::inv(gram_inv, psi_others.t() * psi_others))
                    throw numerical_error("omp_estimate: singular polish Gram matrix");
            }

            GridPick pick{out.pairs[i].angle_rad, out.pairs[i].delay_s, 0.0};
            double wa = 2.0 * angle_step, wd = 2.0 * delay_step;
            for (arma::uword round = 0; round < config.polish_zoom_rounds; ++round) {
                const arma::vec la = local_grid(pick.angle, wa, config.angle_grid.lo,
                                                config.angle_grid.hi, config.refine.points);
                const arma::vec ld = local_grid(pick.delay, wd, 0.0, delay_max,
                                                config.refine.points);
                correlator.eval(la, ld, target, corr, norm2);
                other_corr.clear();
                for (arma::uword j = 0; j < atoms.size(); ++j) {
                    if (j == i)
                        continue;
                    arma::cx_mat cj;
                    arma::vec unused;
                    correlator.eval(la, ld, atoms[j], cj, unused);
                    other_corr.push_back(std::move(cj));
                }
                pick = pick_best(corr, norm2, other_corr, gram_inv, la, ld);
                wa /= config.refine.shrink;
                wd /= config.refine.shrink;
            }

            if (std::abs(pick.delay - out.pairs[i].delay_s) > config.polish_tol_delay_s ||
                std::abs(pick.angle - out.pairs[i].angle_rad) > config.polish_tol_angle_rad)
                moved = true;
            out.pairs[i] = {pick.delay, pick.angle};
            atoms[i] = correlator.atom(pick.angle, pick.delay);
            dictionary.col(i) = arma::vectorise(atoms[i]);
        }
        if (!moved)
            break;
    }

    const arma::cx_vec coef = least_squares(dictionary);
    out.residual_norm = arma::norm(y - dictionary * coef);
    return out;
}

// ---------------------------------------------------------- association

TargetEstimateSet associate(const OmpResult& omp, const AngleSpectrum& spectrum)
{
    const arma::uword s = omp.pairs.size();
    if (spectrum.peak_angles.n_elem != s)
        throw std::invalid_argument("associate: OMP pair and peak counts differ");

    TargetEstimateSet set;
    set.pairs = omp.pairs;
    set.warnings = omp.warnings;
    set.updated_angles.set_size(s);
    set.assignment.zeros(s, s);
    if (s == 0)
        return set;

    arma::mat cost(s, s);
    for (arma::uword i = 0; i < s; ++i)
        for (arma::uword j = 0; j < s; ++j)
            cost(i, j) = circular_angle_cost(omp.pairs[i].angle_rad, spectrum.peak_angles(j));

    const arma::uvec perm = solve_assignment(cost);
    set.interferer_peak = spectrum.peak_values.index_max();
    for (arma::uword i = 0; i < s; ++i) {
        set.assignment(i, perm(i)) = 1;
        set.updated_angles(i) = (perm(i) == set.interferer_peak)
                                    ? spectrum.peak_angles(set.interferer_peak)
                                    : omp.pairs[i].angle_rad;
    }
    return set;
}

arma::uvec match_to_truth(const arma::vec& estimated_angles, const arma::vec& truth_angles)
{
    if (estimated_angles.n_elem != truth_angles.n_elem)
        throw std::invalid_argument("match_to_truth: size mismatch");
    const arma::uword s = truth_angles.n_elem;
    arma::mat cost(s, s);
    for (arma::uword i = 0; i < s; ++i)
        for (arma::uword l = 0; l < s; ++l)
            cost(i, l) = circular_angle_cost(estimated_angles(i), truth_angles(l));
    return solve_assignment(cost);
}

// ------------------------------------------------------------------ RMSE

RmseAccumulator::RmseAccumulator(arma::uword num_targets)
    : se2_delay_(num_targets, arma::fill::zeros), se4_delay_(num_targets, arma::fill::zeros),
      se2_angle_(num_targets, arma::fill::zeros), se4_angle_(num_targets, arma::fill::zeros)
{
}

void RmseAccumulator::add(const std::vector<DelayAnglePair>& pairs,
                          const arma::vec& updated_angles, const arma::vec& truth_delays,
                          const arma::vec& truth_angles)
{
    if (pairs.size() != truth_delays.n_elem || updated_angles.n_elem != truth_delays.n_elem)
        throw std::invalid_argument("RmseAccumulator::add: size mismatch");
    const arma::uvec to_truth = match_to_truth(updated_angles, truth_angles);
    for (arma::uword i = 0; i < pairs.size(); ++i) {
        const arma::uword l = to_truth(i);
        const double de = pairs[i].delay_s - truth_delays(l);
        const double ae = circular_angle_error(updated_angles(i), truth_angles(l));
        se2_delay_(l) += de * de;
        se4_delay_(l) += de * de * de * de;
        se2_angle_(l) += ae * ae;
        se4_angle_(l) += ae * ae * ae * ae;
    }
    ++trials_;
}

void RmseAccumulator::add_failure() { ++failures_; }

namespace {

arma::vec rmse_from_moments(const arma::vec& se2, arma::uword n)
{
    if (n == 0)
        throw estimation_error("RmseAccumulator: no successful trials");
    return arma::sqrt(se2 / static_cast<double>(n));
}

arma::vec rmse_se_from_moments(const arma::vec& se2, const arma::vec& se4, arma::uword n)
{
    if (n == 0)
        throw estimation_error("RmseAccumulator: no successful trials");
    const double dn = static_cast<double>(n);
    arma::vec rmse = arma::sqrt(se2 / dn);
    arma::vec var_sq = se4 / dn - arma::square(se2 / dn);
    var_sq.transform([](double v) { return std::max(v, 0.0); });
    arma::vec se(rmse.n_elem, arma::fill::zeros);
    for (arma::uword i = 0; i < rmse.n_elem; ++i)
        if (rmse(i) > 0.0)
            se(i) = std::sqrt(var_sq(i) / dn) / (2.0 * rmse(i));
    return se;
}

} // namespace

arma::vec RmseAccumulator::delay_rmse() const { return rmse_from_moments(se2_delay_, trials_); }
arma::vec RmseAccumulator::angle_rmse() const { return rmse_from_moments(se2_angle_, trials_); }
arma::vec RmseAccumulator::delay_rmse_se() const
{
    return rmse_se_from_moments(se2_delay_, se4_delay_, trials_);
}
arma::vec RmseAccumulator::angle_rmse_se() const
{
    return rmse_se_from_moments(se2_angle_, se4_angle_, trials_);
}

} // namespace ofdmsense
