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

#ifndef BEAMSEC_DETECTION_HPP
#define BEAMSEC_DETECTION_HPP

#include "beamsec/beamforming.hpp"
#include "beamsec/csi.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace beamsec
{

enum class DetectorKind
{
    cusum,
    ks,
    oracle // alarms exactly at attack onset; evaluation baseline only
};

std::string_view to_string(DetectorKind d) noexcept;
DetectorKind detector_kind_from_string(std::string_view s);

/// Windowed Gaussian GLR-CUSUM for a mean shift of unknown size.
///
/// Inputs are standardized as z = (x - mu0) / sigma0. After each update
///
///     statistic = max_{1 <= k <= min(t, W)} (z_{t-k+1} + ... + z_t)^2 / (2k)
///
/// which is the log-likelihood ratio of "the last k samples have some common
/// nonzero mean" against "all samples are N(0, 1)", maximized over the change
/// point and the post-change mean. `alarmed` latches once the statistic
/// exceeds the threshold; `reset()` clears the window and the latch.
class CusumState
{
public:
    CusumState(double mu0, double sigma0, std::size_t window, double threshold);

    void update(double x);
    void reset();

    double statistic() const noexcept { return statistic_; }
    bool alarmed() const noexcept { return alarmed_; }
    double threshold() const noexcept { return threshold_; }
    void set_threshold(double t) noexcept { threshold_ = t; }
    double mu0() const noexcept { return mu0_; }
    double sigma0() const noexcept { return sigma0_; }
    std::size_t window() const noexcept { return buf_.size(); }
    std::size_t count() const noexcept { return count_; }

    // Standardized deviations currently held, oldest first.
    std::vector<double> window_values() const;

private:
    double mu0_;
    double sigma0_;
    double threshold_;
    std::vector<double> buf_; // ring buffer of standardized deviations
    std::size_t head_ = 0;    // next write position
    std::size_t count_ = 0;   // total updates since reset
    double statistic_ = 0.0;
    bool alarmed_ = false;
};

CusumState cusum_update(CusumState state, double x);

/// H0 law of the beam-power innovation given the one-step prediction.
/// With h = h_pred + u, u ~ CN(0, v) per entry and a unit-norm codeword,
/// |w'h|^2 - |w'h_pred|^2 has mean v and variance 2|w'h_pred|^2 v + v^2.
struct InnovationModel
{
    double variance = 0.0; // v = (1 - rho^2) sigma2 + sigma_e2

    static InnovationModel from_fading(const FadingProcess &proc, double sigma_e2);
};

/// Strongest-beam power innovation |w' h_hat|^2 - |w' h_pred|^2.
double monitored_statistic(const CsiReport &report, const ChannelState &h_predicted, const Codeword &cw_selected);

/// Same innovation, centred and scaled by its H0 law so that it is zero-mean,
/// unit-variance without attack.
double monitored_statistic(const CsiReport &report, const ChannelState &h_predicted, const Codeword &cw_selected,
                           const InnovationModel &model);

using Cdf = std::function<double(double)>;

/// One-sample Kolmogorov-Smirnov distance
///   D = max_i max(i/m - F(x_(i)), F(x_(i)) - (i-1)/m).
double ks_statistic(std::span<const double> samples, const Cdf &ref_cdf);

/// Kolmogorov survival function Q(k) = 2 sum_{j>=1} (-1)^{j-1} exp(-2 j^2 k^2).
double kolmogorov_q(double k);

/// k_alpha with Q(k_alpha) = alpha, found by bisection to 1e-12.
double kolmogorov_quantile(double alpha);

/// Asymptotic critical value k_alpha / sqrt(m).
double ks_critical_value(double alpha, std::size_t m);

struct KsTestResult
{
    double d_stat = 0.0;
    std::size_t n_samples = 0;
    double critical_value = 0.0;
    bool reject = false;
    double alpha = 0.0;
};

KsTestResult ks_test(std::span<const double> samples, const Cdf &ref_cdf, double alpha);

/// Smallest threshold whose empirical alarm rate (maximum > threshold) over
/// the given no-attack runs is <= target_fpr: the empirical quantile of the
/// per-run maxima at rank n - floor(target_fpr * n).
double calibrate_threshold(std::span<const double> run_maxima, double target_fpr);

/// Draws n_runs maxima from `h0_run_max` and calibrates on them.
double calibrate_threshold(const std::function<double(std::size_t run)> &h0_run_max, double target_fpr,
                           std::size_t n_runs);

struct RocPoint
{
    double threshold = 0.0;
    double false_positive_rate = 0.0;
    double detection_probability = 0.0;
    std::size_t n_samples_used = 0;
};

// Alarm fraction of the run maxima.
double alarm_rate(std::span<const double> run_maxima, double threshold);

/// P_D over attacked runs, paired with the FPR measured on disjoint H0 runs.
RocPoint evaluate_detection(std::span<const double> h0_run_maxima, std::span<const double> h1_run_maxima,
                            double threshold, std::size_t n_samples);

struct MissEstimate
{
    double miss = 1.0;
    double detection = 0.0;
};

struct SampleSizeResult
{
    std::size_t m_min = 0;
    double miss_at_m = 1.0;
    double detection_at_m = 0.0;
};

/// Coarse grid of test sizes {10, 15, ..., 300}; past 300 the step doubles up
/// to 10^4.
std::vector<std::size_t> sample_size_grid();

/// Smallest m whose estimated miss probability is <= miss_target. The coarse
/// grid is scanned first, then the four sizes just below the first hit are
/// checked one by one (within the 10..300 range). Throws not_achievable when
/// no m <= 10^4 meets the target.
SampleSizeResult min_samples_for_miss(const std::function<MissEstimate(std::size_t m)> &estimate,
                                      double miss_target);

} // namespace beamsec

#endif
