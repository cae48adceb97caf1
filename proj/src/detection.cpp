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

#include "beamsec/detection.hpp"

#include "beamsec/errors.hpp"

#include <algorithm>
#include <cmath>

namespace beamsec
{

std::string_view to_string(DetectorKind d) noexcept
{
    switch (d)
    {
    case DetectorKind::cusum:
        return "cusum";
    case DetectorKind::ks:
        return "ks";
    case DetectorKind::oracle:
        return "oracle";
    }
    return "unknown";
}

DetectorKind detector_kind_from_string(std::string_view s)
{
    if (s == "cusum")
        return DetectorKind::cusum;
    if (s == "ks")
        return DetectorKind::ks;
    if (s == "oracle")
        return DetectorKind::oracle;
    throw invalid_argument("unknown detector '" + std::string(s) + "'");
}

CusumState::CusumState(double mu0, double sigma0, std::size_t window, double threshold)
    : mu0_(mu0), sigma0_(sigma0), threshold_(threshold), buf_(window, 0.0)
{
    if (!(sigma0 > 0.0) || !std::isfinite(sigma0) || !std::isfinite(mu0))
        throw invalid_argument("CusumState: sigma0 must be finite and > 0");
    if (window < 2)
        throw invalid_argument("CusumState: window must be >= 2");
}

void CusumState::update(double x)
{
    if (!std::isfinite(x))
        throw invalid_argument("cusum_update: non-finite input");
    buf_[head_] = (x - mu0_) / sigma0_;
    head_ = (head_ + 1) % buf_.size();
    ++count_;

    const std::size_t n = std::min(count_, buf_.size());
    double sum = 0.0;
    double best = 0.0;
    std::size_t pos = head_;
    for (std::size_t k = 1; k <= n; ++k)
    {
        pos = (pos == 0) ? buf_.size() - 1 : pos - 1;
        sum += buf_[pos];
        best = std::max(best, sum * sum / (2.0 * static_cast<double>(k)));
    }
    statistic_ = best;
    if (statistic_ > threshold_)
        alarmed_ = true;
}

void CusumState::reset()
{
    std::fill(buf_.begin(), buf_.end(), 0.0);
    head_ = 0;
    count_ = 0;
    statistic_ = 0.0;
    alarmed_ = false;
}

std::vector<double> CusumState::window_values() const
{
    const std::size_t n = std::min(count_, buf_.size());
    std::vector<double> out(n);
    std::size_t pos = (head_ + buf_.size() - n) % buf_.size();
    for (std::size_t i = 0; i < n; ++i)
    {
        out[i] = buf_[pos];
        pos = (pos + 1) % buf_.size();
    }
    return out;
}

CusumState cusum_update(CusumState state, double x)
{
    state.update(x);
    return state;
}

InnovationModel InnovationModel::from_fading(const FadingProcess &proc, double sigma_e2)
{
    proc.validate();
    return {(1.0 - proc.rho * proc.rho) * proc.sigma2 + sigma_e2};
}

namespace
{

cd project(const Codeword &cw, std::span<const cd> h)
{
    const auto &w = cw.weights();
    cd acc{0.0, 0.0};
    for (std::size_t k = 0; k < w.size(); ++k)
        acc += std::conj(w[k]) * h[k];
    return acc;
}

} // namespace

double monitored_statistic(const CsiReport &report, const ChannelState &h_predicted, const Codeword &cw_selected)
{
    if (report.h_hat.n_ant() != h_predicted.n_ant() || cw_selected.size() != h_predicted.n_ant())
        throw invalid_argument("monitored_statistic: dimension mismatch");
    return std::norm(project(cw_selected, report.h_hat.column(0))) -
           std::norm(project(cw_selected, h_predicted.column(0)));
}

double monitored_statistic(const CsiReport &report, const ChannelState &h_predicted, const Codeword &cw_selected,
                           const InnovationModel &model)
{
    if (!(model.variance > 0.0))
        throw invalid_argument("monitored_statistic: innovation variance must be > 0");
    const double raw = monitored_statistic(report, h_predicted, cw_selected);
    const double pred_power = std::norm(project(cw_selected, h_predicted.column(0)));
    const double v = model.variance;
    return (raw - v) / std::sqrt(2.0 * pred_power * v + v * v);
}

double ks_statistic(std::span<const double> samples, const Cdf &ref_cdf)
{
    if (samples.empty())
        throw invalid_argument("ks_statistic: no samples");
    std::vector<double> x(samples.begin(), samples.end());
    std::sort(x.begin(), x.end());
    const double m = static_cast<double>(x.size());
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        const double f = ref_cdf(x[i]);
        const double above = static_cast<double>(i + 1) / m - f;
        const double below = f - static_cast<double>(i) / m;
        d = std::max({d, above, below});
    }
    return d;
}

double kolmogorov_q(double k)
{
    if (k <= 0.0)
        return 1.0;
    // The alternating series converges slowly for small k; Q is 1 to double
    // precision below 0.2.
    if (k < 0.2)
        return 1.0;
    double sum = 0.0;
    for (int j = 1; j <= 100; ++j)
    {
        const double term = std::exp(-2.0 * j * j * k * k);
        sum += (j % 2 == 1) ? term : -term;
        if (term < 1e-18)
            break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

double kolmogorov_quantile(double alpha)
{
    if (!(alpha > 0.0 && alpha < 1.0))
        throw invalid_argument("ks_critical_value: alpha must lie in (0, 1)");
    double lo = 0.2;
    double hi = 10.0;
    while (hi - lo > 1e-12)
    {
        const double mid = 0.5 * (lo + hi);
        if (kolmogorov_q(mid) > alpha)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double ks_critical_value(double alpha, std::size_t m)
{
    if (m == 0)
        throw invalid_argument("ks_critical_value: m must be >= 1");
    return kolmogorov_quantile(alpha) / std::sqrt(static_cast<double>(m));
}

KsTestResult ks_test(std::span<const double> samples, const Cdf &ref_cdf, double alpha)
{
    KsTestResult r;
    r.d_stat = ks_statistic(samples, ref_cdf);
    r.n_samples = samples.size();
    r.alpha = alpha;
    r.critical_value = ks_critical_value(alpha, samples.size());
    r.reject = r.d_stat > r.critical_value;
    return r;
}

double calibrate_threshold(std::span<const double> run_maxima, double target_fpr)
{
    if (!(target_fpr > 0.0 && target_fpr < 1.0))
        throw invalid_argument("calibrate_threshold: target_fpr must lie in (0, 1)");
    if (run_maxima.empty())
        throw invalid_argument("calibrate_threshold: no runs");
    std::vector<double> x(run_maxima.begin(), run_maxima.end());
    std::sort(x.begin(), x.end());
    if (x.front() == x.back())
        throw calibration_error("calibrate_threshold: degenerate no-attack generator (constant run maxima)");
    const std::size_t n = x.size();
    const auto allowed = static_cast<std::size_t>(std::floor(target_fpr * static_cast<double>(n)));
    return x[n - 1 - std::min(allowed, n - 1)];
}

double calibrate_threshold(const std::function<double(std::size_t run)> &h0_run_max, double target_fpr,
                           std::size_t n_runs)
{
    if (n_runs < 100)
        throw invalid_argument("calibrate_threshold: at least 100 runs required");
    std::vector<double> maxima(n_runs);
    for (std::size_t i = 0; i < n_runs; ++i)
        maxima[i] = h0_run_max(i);
    return calibrate_threshold(maxima, target_fpr);
}

double alarm_rate(std::span<const double> run_maxima, double threshold)
{
    if (run_maxima.empty())
        return 0.0;
    const auto hits = std::count_if(run_maxima.begin(), run_maxima.end(), [&](double v) { return v > threshold; });
    return static_cast<double>(hits) / static_cast<double>(run_maxima.size());
}

RocPoint evaluate_detection(std::span<const double> h0_run_maxima, std::span<const double> h1_run_maxima,
                            double threshold, std::size_t n_samples)
{
    RocPoint p;
    p.threshold = threshold;
    p.false_positive_rate = alarm_rate(h0_run_maxima, threshold);
    p.detection_probability = alarm_rate(h1_run_maxima, threshold);
    p.n_samples_used = n_samples;
    return p;
}

std::vector<std::size_t> sample_size_grid()
{
    std::vector<std::size_t> grid;
    for (std::size_t m = 10; m <= 300; m += 5)
        grid.push_back(m);
    for (std::size_t m = 400; m < 10000; m *= 2)
        grid.push_back(m);
    grid.push_back(10000);
    return grid;
}

SampleSizeResult min_samples_for_miss(const std::function<MissEstimate(std::size_t m)> &estimate,
                                      double miss_target)
{
    if (!(miss_target > 0.0 && miss_target < 1.0))
        throw invalid_argument("min_samples_for_miss: miss_target must lie in (0, 1)");
    const auto grid = sample_size_grid();
    for (std::size_t gi = 0; gi < grid.size(); ++gi)
    {
        const std::size_t m = grid[gi];
        const MissEstimate e = estimate(m);
        if (e.miss > miss_target)
            continue;
        SampleSizeResult best{m, e.miss, e.detection};
        if (gi > 0 && m <= 300)
        {
            for (std::size_t r = grid[gi - 1] + 1; r < m; ++r)
            {
                const MissEstimate er = estimate(r);
                if (er.miss <= miss_target)
                {
                    best = {r, er.miss, er.detection};
                    break;
                }
            }
        }
        return best;
    }
    throw not_achievable("min_samples_for_miss: miss target not reachable with m <= 10000");
}

} // namespace beamsec
