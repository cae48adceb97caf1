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

#ifndef BEAMSEC_EXPERIMENTS_HPP
#define BEAMSEC_EXPERIMENTS_HPP

#include "beamsec/attacks.hpp"
#include "beamsec/beamforming.hpp"
#include "beamsec/detection.hpp"

#include <cstdint>
#include <vector>

namespace beamsec
{

// ---------------------------------------------------------------- receivers

/// Receivers scattered in front of the array. Distances are in units of the
/// link-budget reference distance, at which a path has 0 dB loss.
struct ReceiverPopulation
{
    std::vector<double> distance;
    std::vector<double> angle;

    std::size_t size() const noexcept { return distance.size(); }
    // Matched-beam LoS SNR: tx + 10 log10(n_ant) - 20 log10(d) [dB].
    double nominal_snr_db(std::size_t r, double tx_power_db, std::size_t n_ant) const;
};

ReceiverPopulation make_receiver_population(std::size_t n, double min_distance, double max_distance,
                                            double max_angle, Rng &rng);

// ---------------------------------------------------------------- rate sweep

struct RateSweepConfig
{
    std::size_t n_ant = 64;
    std::size_t n_beams = 64;
    std::size_t n_receivers = 50;
    std::size_t n_channels = 10000;
    double tx_power_db = 10.0;
    double min_distance = 2.0;
    double max_distance = 8.0;
    double max_angle = 1.0471975511965976; // pi/3
    std::size_t n_nlos = 2;
    double nlos_excess_loss_db = 10.0;
    std::vector<double> degradations{0.1, 0.2, 0.3, 0.4};
    std::uint64_t seed = 1;
};

struct RateSweepRow
{
    double degradation = 0.0;
    double mean_rate_clean = 0.0;
    double mean_rate_attacked = 0.0;
    double reduction_pct = 0.0;
    double closed_form_pct = 0.0; // single link at exactly tx_power_db
};

struct RateSweepResult
{
    std::vector<RateSweepRow> rows;
    double mean_snr_db = 0.0;
};

/// Rate reduction caused by the coding attack: for each channel realization
/// the beam is chosen from clean CSI, the realized SNR is degraded by the
/// given fraction of its dB value, and the mean rates are compared.
RateSweepResult run_rate_sweep(const RateSweepConfig &cfg);

// Percentage rate drop of a single link at snr_db under degradation fraction.
double closed_form_rate_reduction_pct(double snr_db, double fraction);

// ---------------------------------------------------------------- GLR-CUSUM

struct CusumExperimentConfig
{
    std::size_t n_ant = 64;
    std::size_t n_beams = 64;
    std::size_t n_pilot = 8;
    double rho = 0.708887; // fitted by fit_rho with the defaults below
    double degradation = 0.1;
    std::size_t window = 100;
    double target_fpr = 0.1;
    std::size_t min_samples = 50;
    std::size_t max_samples = 100;
    std::size_t n_runs = 1000;
    std::size_t n_h0_runs = 2000;
    double target_detection = 0.55; // used by fit_rho
    RateSweepConfig population;     // links are drawn from these receivers
    std::uint64_t seed = 11;
};

struct CusumEvaluation
{
    std::vector<double> thresholds;        // per run length min..max
    double pooled_detection = 0.0;         // runs spread over min..max samples
    double pooled_false_positive = 0.0;    // same spread, fresh no-attack runs
    std::vector<RocPoint> per_length;      // one point per evaluated length
};

/// Monte-Carlo harness for the sequential detector on dynamic Rayleigh links.
///
/// Each run tracks one link (drawn uniformly from the receiver population)
/// for max_samples slots. Per slot: AR(1) fading step, pilot burst, LS
/// estimate, and, when attacked, the coding attack realized as a
/// destructive pilot-aligned modulation that scales the estimate by
/// sqrt(g). The tracked beam comes from the previous report; the innovation
/// is standardized against the known-gain prediction rho * h_prev.
class CusumExperiment
{
public:
    explicit CusumExperiment(CusumExperimentConfig cfg);

    const CusumExperimentConfig &config() const noexcept { return cfg_; }

    // Running maximum of the GLR statistic after each of max_samples slots.
    std::vector<double> run_trace(bool attacked, std::uint64_t seed) const;

    // Standardized innovations of one run (no GLR), for diagnostics and tests.
    std::vector<double> innovations(bool attacked, std::uint64_t seed) const;

    CusumEvaluation evaluate(std::uint64_t h0_seed, std::uint64_t h1_seed, std::size_t n_h0,
                             std::size_t n_h1) const;

private:
    template <typename Sink>
    void simulate(bool attacked, std::uint64_t seed, Sink &&sink) const;

    CusumExperimentConfig cfg_;
    Codebook codebook_;
    CVector pilot_;
    std::vector<double> link_snr_db_;
};

/// Fits the per-slot fading correlation so that the pooled detection
/// probability matches cfg.target_detection (bisection on calibration seeds).
double fit_rho(CusumExperimentConfig cfg, double lo = 0.5, double hi = 0.95, int iterations = 10);

// ---------------------------------------------------------------- KS

struct KsExperimentConfig
{
    std::size_t n_ant = 64;
    std::size_t n_pilot = 8;
    double channel_sigma2 = 1.0;
    double tx_power_db = 10.0; // pilot SNR per entry; noise_var = 10^(-tx/10)
    double alpha = 0.01;
    std::size_t tests_per_episode = 4;
    std::size_t n_episodes = 1000;
    double delta = 0.119865;  // phase-spoof magnitude [rad], fitted by fit_delta
    std::size_t fit_m = 120;  // fit point for fit_delta
    double fit_miss = 0.1;
    std::uint64_t seed = 21;
};

/// Monte-Carlo harness for the distribution test on CSI error magnitudes.
///
/// Quasi-static flat-fading blocks; each report contributes n_ant error
/// magnitudes |h_hat - h| measured against the reference (true) channel. The
/// reference law is the worst-case LS error model, Rayleigh with
/// sigma_e2 = noise_var / n_pilot. An attack episode is screened by
/// `tests_per_episode` independent tests of m measurements each and counts
/// as missed when none rejects; the reported detection probability is the
/// single-test rejection rate.
class KsExperiment
{
public:
    explicit KsExperiment(KsExperimentConfig cfg);

    const KsExperimentConfig &config() const noexcept { return cfg_; }
    CsiErrorModel error_model() const noexcept { return model_; }

    // m error magnitudes from consecutive reports, phase-spoofed with delta.
    std::vector<double> draw_samples(std::size_t m, double delta, Rng &rng) const;

    MissEstimate estimate(std::size_t m, double delta, std::uint64_t seed) const;

    // Seeds are derived from cfg.seed and m so the grid points are reproducible.
    SampleSizeResult min_samples_for_miss(double miss_target, double delta) const;

    double h0_rejection_rate(std::size_t m, std::size_t trials, std::uint64_t seed) const;

private:
    KsExperimentConfig cfg_;
    CVector pilot_;
    double noise_var_;
    CsiErrorModel model_;
};

/// Fits delta so that the episode miss probability at cfg.fit_m equals
/// cfg.fit_miss (bisection with common random numbers).
double fit_delta(const KsExperimentConfig &cfg, double lo = 0.0, double hi = 1.0, int iterations = 16);

} // namespace beamsec

#endif
