// SPDX-License-Identifier: Apache-2.0
//
// beamsec: attack injection and detection for beamformed massive-MIMO links
// Copyright (C) 2026 The beamsec authors
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

#include "beamsec/experiments.hpp"

#include "beamsec/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace beamsec
{

double ReceiverPopulation::nominal_snr_db(std::size_t r, double tx_power_db, std::size_t n_ant) const
{
    return tx_power_db + to_db(static_cast<double>(n_ant)) - 20.0 * std::log10(distance.at(r));
}

ReceiverPopulation make_receiver_population(std::size_t n, double min_distance, double max_distance,
                                            double max_angle, Rng &rng)
{
    if (n == 0)
        throw invalid_argument("make_receiver_population: need at least one receiver");
    if (!(min_distance >= 1.0) || !(max_distance >= min_distance))
        throw invalid_argument("make_receiver_population: distances must satisfy 1 <= min <= max");
    if (!(max_angle >= 0.0 && max_angle <= std::numbers::pi / 2.0))
        throw invalid_argument("make_receiver_population: max_angle must lie in [0, pi/2]");
    ReceiverPopulation pop;
    pop.distance.resize(n);
    pop.angle.resize(n);
    for (std::size_t r = 0; r < n; ++r)
    {
        pop.distance[r] = rng.uniform(min_distance, max_distance);
        pop.angle[r] = rng.uniform(-max_angle, max_angle);
    }
    return pop;
}

double closed_form_rate_reduction_pct(double snr_db, double fraction)
{
    const double clean = achievable_rate(from_db(snr_db));
    const double attacked = achievable_rate(degrade_snr(from_db(snr_db), fraction));
    return 100.0 * (1.0 - attacked / clean);
}

RateSweepResult run_rate_sweep(const RateSweepConfig &cfg)
{
    if (cfg.n_channels == 0)
        throw invalid_argument("run_rate_sweep: n_channels must be >= 1");
    Rng pop_rng(cfg.seed);
    const ReceiverPopulation pop =
        make_receiver_population(cfg.n_receivers, cfg.min_distance, cfg.max_distance, cfg.max_angle, pop_rng);
    const Codebook cb = dft_codebook(cfg.n_ant, cfg.n_beams);
    LinkBudget lb;
    lb.tx_power_db = cfg.tx_power_db;

    double clean_sum = 0.0;
    double snr_db_sum = 0.0;
    std::vector<double> attacked_sum(cfg.degradations.size(), 0.0);

    for (std::size_t i = 0; i < cfg.n_channels; ++i)
    {
        Rng rng(derive_seed(cfg.seed, i + 1));
        const std::size_t r = i % pop.size();
        const double los_loss = 20.0 * std::log10(pop.distance[r]);
        PathSet ps;
        ps.paths.push_back(make_path(pop.angle[r], los_loss, rng.uniform(-std::numbers::pi, std::numbers::pi)));
        for (std::size_t l = 0; l < cfg.n_nlos; ++l)
        {
            const double aod = rng.uniform(-std::numbers::pi / 2.0, std::numbers::pi / 2.0);
            ps.paths.push_back(make_path(aod, los_loss + cfg.nlos_excess_loss_db,
                                         rng.uniform(-std::numbers::pi, std::numbers::pi)));
        }
        const ChannelState h = generate_channel(ps, cfg.n_ant);
        const BeamChoice beam = select_beam(cb, h);
        const double snr = realized_snr(h, cb.codewords[beam.index], lb);
        clean_sum += achievable_rate(snr);
        snr_db_sum += to_db(snr);
        for (std::size_t j = 0; j < cfg.degradations.size(); ++j)
            attacked_sum[j] += achievable_rate(degrade_snr(snr, cfg.degradations[j]));
    }

    RateSweepResult res;
    const double n = static_cast<double>(cfg.n_channels);
    res.mean_snr_db = snr_db_sum / n;
    for (std::size_t j = 0; j < cfg.degradations.size(); ++j)
    {
        RateSweepRow row;
        row.degradation = cfg.degradations[j];
        row.mean_rate_clean = clean_sum / n;
        row.mean_rate_attacked = attacked_sum[j] / n;
        row.reduction_pct = 100.0 * (1.0 - attacked_sum[j] / clean_sum);
        row.closed_form_pct = closed_form_rate_reduction_pct(cfg.tx_power_db, cfg.degradations[j]);
        res.rows.push_back(row);
    }
    return res;
}

// ---------------------------------------------------------------- GLR-CUSUM

namespace
{

double harmonic_number(std::size_t n)
{
    double h = 0.0;
    for (std::size_t b = 1; b <= n; ++b)
        h += 1.0 / static_cast<double>(b);
    return h;
}

} // namespace

CusumExperiment::CusumExperiment(CusumExperimentConfig cfg)
    : cfg_(std::move(cfg)), codebook_(dft_codebook(cfg_.n_ant, cfg_.n_beams)), pilot_(make_pilot(cfg_.n_pilot))
{
    if (cfg_.min_samples < 1 || cfg_.max_samples < cfg_.min_samples)
        throw invalid_argument("CusumExperiment: need 1 <= min_samples <= max_samples");
    if (!(cfg_.rho >= 0.0 && cfg_.rho < 1.0))
        throw invalid_argument("CusumExperiment: rho must lie in [0, 1)");
    Rng pop_rng(cfg_.population.seed);
    const auto &p = cfg_.population;
    const ReceiverPopulation pop =
        make_receiver_population(p.n_receivers, p.min_distance, p.max_distance, p.max_angle, pop_rng);
    for (std::size_t r = 0; r < pop.size(); ++r)
        link_snr_db_.push_back(pop.nominal_snr_db(r, p.tx_power_db, p.n_ant));
}

template <typename Sink>
void CusumExperiment::simulate(bool attacked, std::uint64_t seed, Sink &&sink) const
{
    Rng rng(seed);
    const double snr_db = link_snr_db_[rng.below(link_snr_db_.size())];
    // Per-entry variance such that the best of n_beams orthonormal beams has mean SNR snr_db.
    const double sigma2 = from_db(snr_db) / harmonic_number(cfg_.n_beams);
    const FadingProcess proc{cfg_.rho, sigma2, seed};
    const double noise_var = 1.0;
    const InnovationModel model =
        InnovationModel::from_fading(proc, ls_error_model(noise_var, cfg_.n_pilot).sigma_e2);
    const double g = coding_attack_power_factor(snr_db, cfg_.degradation);
    const double attack_power = (1.0 - std::sqrt(g)) * (1.0 - std::sqrt(g));
    CVector anti_pilot(pilot_.size());
    for (std::size_t t = 0; t < pilot_.size(); ++t)
        anti_pilot[t] = -pilot_[t];

    ChannelState h = sample_rayleigh_block(cfg_.n_ant, 1, sigma2, rng);
    CsiReport prev = estimate_csi(transmit_pilot(h, pilot_, noise_var, rng));
    for (std::size_t t = 0; t < cfg_.max_samples; ++t)
    {
        ChannelState next = fading_step(h, proc, rng);
        ReceivedSignal sig = transmit_pilot(next, pilot_, noise_var, rng);
        if (attacked)
            sig = contaminate_pilot(sig, next, attack_power, anti_pilot);
        const CsiReport rep = estimate_csi(sig);
        const BeamChoice beam = select_beam(codebook_, prev.h_hat);
        ChannelState pred = h;
        pred *= cfg_.rho;
        sink(monitored_statistic(rep, pred, codebook_.codewords[beam.index], model));
        h = std::move(next);
        prev = rep;
    }
}

std::vector<double> CusumExperiment::run_trace(bool attacked, std::uint64_t seed) const
{
    std::vector<double> trace;
    trace.reserve(cfg_.max_samples);
    CusumState glr(0.0, 1.0, cfg_.window, std::numeric_limits<double>::infinity());
    double running = 0.0;
    simulate(attacked, seed, [&](double z) {
        glr.update(z);
        running = std::max(running, glr.statistic());
        trace.push_back(running);
    });
    return trace;
}

std::vector<double> CusumExperiment::innovations(bool attacked, std::uint64_t seed) const
{
    std::vector<double> out;
    simulate(attacked, seed, [&](double z) { out.push_back(z); });
    return out;
}

CusumEvaluation CusumExperiment::evaluate(std::uint64_t h0_seed, std::uint64_t h1_seed, std::size_t n_h0,
                                          std::size_t n_h1) const
{
    const std::size_t lengths = cfg_.max_samples - cfg_.min_samples + 1;
    auto collect = [&](bool attacked, std::uint64_t base, std::size_t runs) {
        std::vector<std::vector<double>> traces(runs);
        for (std::size_t i = 0; i < runs; ++i)
            traces[i] = run_trace(attacked, derive_seed(base, i));
        return traces;
    };
    const auto h0 = collect(false, h0_seed, n_h0);
    const auto h1 = collect(true, h1_seed, n_h1);
    // Fresh no-attack runs for an out-of-sample false-positive estimate.
    const auto h0_fresh = collect(false, h1_seed ^ 0x5bd1e995ULL, n_h1);

    CusumEvaluation ev;
    std::vector<double> column(n_h0);
    for (std::size_t li = 0; li < lengths; ++li)
    {
        const std::size_t n = cfg_.min_samples + li;
        for (std::size_t i = 0; i < n_h0; ++i)
            column[i] = h0[i][n - 1];
        ev.thresholds.push_back(calibrate_threshold(column, cfg_.target_fpr));

        std::vector<double> att(n_h1);
        std::vector<double> fresh(n_h1);
        for (std::size_t i = 0; i < n_h1; ++i)
        {
            att[i] = h1[i][n - 1];
            fresh[i] = h0_fresh[i][n - 1];
        }
        ev.per_length.push_back(evaluate_detection(fresh, att, ev.thresholds.back(), n));
    }

    std::size_t detected = 0;
    std::size_t false_alarms = 0;
    for (std::size_t i = 0; i < n_h1; ++i)
    {
        const std::size_t li = i % lengths;
        const std::size_t n = cfg_.min_samples + li;
        detected += h1[i][n - 1] > ev.thresholds[li] ? 1 : 0;
        false_alarms += h0_fresh[i][n - 1] > ev.thresholds[li] ? 1 : 0;
    }
    ev.pooled_detection = static_cast<double>(detected) / static_cast<double>(n_h1);
    ev.pooled_false_positive = static_cast<double>(false_alarms) / static_cast<double>(n_h1);
    return ev;
}

double fit_rho(CusumExperimentConfig cfg, double lo, double hi, int iterations)
{
    // Calibration seeds are disjoint from the evaluation seeds cfg.seed * 3 + {0, 1}.
    const std::uint64_t h0_seed = cfg.seed * 7919 + 101;
    const std::uint64_t h1_seed = cfg.seed * 7919 + 202;
    for (int it = 0; it < iterations; ++it)
    {
        cfg.rho = 0.5 * (lo + hi);
        const CusumExperiment exp(cfg);
        const double pd = exp.evaluate(h0_seed, h1_seed, cfg.n_h0_runs / 2, cfg.n_runs / 2).pooled_detection;
        if (pd < cfg.target_detection)
            lo = cfg.rho;
        else
            hi = cfg.rho;
    }
    return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------- KS

KsExperiment::KsExperiment(KsExperimentConfig cfg)
    : cfg_(std::move(cfg)), pilot_(make_pilot(cfg_.n_pilot)), noise_var_(from_db(-cfg_.tx_power_db)),
      model_(ls_error_model(noise_var_, cfg_.n_pilot))
{
    if (cfg_.tests_per_episode == 0 || cfg_.n_episodes == 0)
        throw invalid_argument("KsExperiment: tests_per_episode and n_episodes must be >= 1");
}

std::vector<double> KsExperiment::draw_samples(std::size_t m, double delta, Rng &rng) const
{
    std::vector<double> out;
    out.reserve(m + cfg_.n_ant);
    while (out.size() < m)
    {
        const ChannelState h = sample_rayleigh_block(cfg_.n_ant, 1, cfg_.channel_sigma2, rng);
        CsiReport rep = estimate_csi(transmit_pilot(h, pilot_, noise_var_, rng));
        if (delta > 0.0)
            rep = spoof_csi_phase(rep, delta, rng);
        const auto err = csi_error_samples(rep, h);
        out.insert(out.end(), err.begin(), err.end());
    }
    out.resize(m);
    return out;
}

MissEstimate KsExperiment::estimate(std::size_t m, double delta, std::uint64_t seed) const
{
    Rng rng(seed);
    const Cdf cdf = [model = model_](double x) { return model.magnitude_cdf(x); };
    const double crit = ks_critical_value(cfg_.alpha, m);
    std::size_t missed = 0;
    std::size_t rejections = 0;
    for (std::size_t e = 0; e < cfg_.n_episodes; ++e)
    {
        bool any = false;
        for (std::size_t j = 0; j < cfg_.tests_per_episode; ++j)
        {
            const auto x = draw_samples(m, delta, rng);
            if (ks_statistic(x, cdf) > crit)
            {
                any = true;
                ++rejections;
            }
        }
        missed += any ? 0 : 1;
    }
    MissEstimate r;
    r.miss = static_cast<double>(missed) / static_cast<double>(cfg_.n_episodes);
    r.detection = static_cast<double>(rejections) / static_cast<double>(cfg_.n_episodes * cfg_.tests_per_episode);
    return r;
}

SampleSizeResult KsExperiment::min_samples_for_miss(double miss_target, double delta) const
{
    return beamsec::min_samples_for_miss(
        [&](std::size_t m) { return estimate(m, delta, derive_seed(cfg_.seed * 100003, m)); }, miss_target);
}

double KsExperiment::h0_rejection_rate(std::size_t m, std::size_t trials, std::uint64_t seed) const
{
    Rng rng(seed);
    const Cdf cdf = [model = model_](double x) { return model.magnitude_cdf(x); };
    const double crit = ks_critical_value(cfg_.alpha, m);
    std::size_t rej = 0;
    for (std::size_t i = 0; i < trials; ++i)
        rej += ks_statistic(draw_samples(m, 0.0, rng), cdf) > crit ? 1 : 0;
    return static_cast<double>(rej) / static_cast<double>(trials);
}

double fit_delta(const KsExperimentConfig &cfg, double lo, double hi, int iterations)
{
    const KsExperiment exp(cfg);
    const std::uint64_t seed = cfg.seed * 7919 + 303;
    for (int it = 0; it < iterations; ++it)
    {
        const double mid = 0.5 * (lo + hi);
        if (exp.estimate(cfg.fit_m, mid, seed).miss > cfg.fit_miss)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace beamsec
