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

#include "doctest.h"

#include "beamsec/beamforming.hpp"
#include "beamsec/detection.hpp"
#include "beamsec/errors.hpp"

#include "oracles.hpp"

#include <cmath>

using namespace beamsec;

TEST_SUITE("detection")
{
    TEST_CASE("GLR-CUSUM equals the brute-force maximization at every step")
    {
        Rng rng(31);
        for (int trial = 0; trial < 20; ++trial)
        {
            const std::size_t window = 1 + rng.below(120);
            const double mu0 = rng.uniform(-1, 1), sigma0 = rng.uniform(0.5, 2.0);
            const std::size_t change = rng.below(300);
            const double shift = rng.uniform(-2, 2);
            CusumState s(mu0, sigma0, window, 1e300);
            std::vector<double> x;
            for (std::size_t t = 0; t < 300; ++t)
            {
                x.push_back(mu0 + sigma0 * rng.normal() + (t >= change ? shift : 0.0));
                s.update(x.back());
                const double expect = oracle::glr_statistic(x, x.size(), window, mu0, sigma0);
                REQUIRE(s.statistic() == doctest::Approx(expect).epsilon(1e-9));
            }
        }
    }

    TEST_CASE("alarm latches on the first crossing and reset clears it")
    {
        CusumState s(0.0, 1.0, 10, 8.0);
        std::vector<double> x{0.1, -0.2, 4.0, 1.0, -5.0, -5.0};
        bool seen = false;
        std::vector<double> hist;
        for (double v : x)
        {
            s.update(v);
            hist.push_back(v);
            seen = seen || oracle::glr_statistic(hist, hist.size(), 10, 0.0, 1.0) > 8.0;
            CHECK(s.alarmed() == seen);
        }
        CHECK(s.alarmed());
        s.reset();
        CHECK_FALSE(s.alarmed());
        CHECK(s.count() == 0);
        CHECK(s.statistic() == 0.0);
        CHECK_THROWS_AS(s.update(NAN), invalid_argument);
        CHECK_THROWS_AS(CusumState(0.0, 0.0, 10, 1.0), invalid_argument);
        CHECK_THROWS_AS(CusumState(0.0, 1.0, 0, 1.0), invalid_argument);
    }

    TEST_CASE("window values are reported oldest first")
    {
        CusumState s(1.0, 2.0, 3, 100.0);
        for (double v : {3.0, 5.0, 7.0, 9.0})
            s.update(v);
        CHECK(s.window_values() == std::vector<double>{2.0, 3.0, 4.0});
        const CusumState t = cusum_update(s, 11.0);
        CHECK(t.window_values() == std::vector<double>{3.0, 4.0, 5.0});
        CHECK(s.count() == 4);
    }

    TEST_CASE("standardized innovation is zero-mean and unit-variance under its model")
    {
        Rng rng(40);
        const Codebook cb = dft_codebook(16, 16);
        const FadingProcess proc{0.7, 2.0, 0};
        const InnovationModel model = InnovationModel::from_fading(proc, 0.1);
        CHECK(model.variance == doctest::Approx((1 - 0.49) * 2.0 + 0.1));
        double s = 0, s2 = 0;
        const int n = 40000;
        for (int i = 0; i < n; ++i)
        {
            const ChannelState pred = sample_rayleigh_block(16, 1, 1.0, rng);
            CsiReport rep;
            rep.h_hat = pred;
            for (cd &v : rep.h_hat.data())
                v += rng.complex_normal(model.variance);
            const double z = monitored_statistic(rep, pred, cb.codewords[select_beam(cb, pred).index], model);
            s += z;
            s2 += z * z;
        }
        CHECK(std::abs(s / n) < 0.02);
        CHECK(s2 / n == doctest::Approx(1.0).epsilon(0.03));
        CsiReport same;
        same.h_hat = sample_rayleigh_block(16, 1, 1.0, rng);
        CHECK(monitored_statistic(same, same.h_hat, cb.codewords[0]) == 0.0);
    }

    TEST_CASE("KS statistic equals the grid supremum")
    {
        Rng rng(50);
        const CsiErrorModel model{0.3};
        const Cdf cdf = [&](double x) { return model.magnitude_cdf(x); };
        for (int trial = 0; trial < 10; ++trial)
        {
            const std::size_t m = 5 + rng.below(200);
            const double scale = rng.uniform(0.7, 1.4);
            std::vector<double> x(m);
            for (double &v : x)
                v = scale * std::abs(rng.complex_normal(model.sigma_e2));
            const double d = ks_statistic(x, cdf);
            CHECK(d == doctest::Approx(oracle::ks_grid_sup(x, cdf, 0.0, 5.0, 1000000)).epsilon(1e-9));
        }
        CHECK_THROWS_AS(ks_statistic(std::vector<double>{}, cdf), invalid_argument);
    }

    TEST_CASE("Kolmogorov distribution")
    {
        for (double k : {0.3, 0.8, 1.2, 1.6276, 2.5})
            CHECK(kolmogorov_q(k) == doctest::Approx(oracle::kolmogorov_survival(k)).epsilon(1e-10));
        CHECK(kolmogorov_quantile(0.05) == doctest::Approx(1.3581).epsilon(1e-4));
        CHECK(kolmogorov_quantile(0.01) == doctest::Approx(1.6276).epsilon(1e-4));
        for (double a : {0.001, 0.01, 0.1, 0.5})
            CHECK(oracle::kolmogorov_survival(kolmogorov_quantile(a)) == doctest::Approx(a).epsilon(1e-8));
        CHECK(ks_critical_value(0.01, 100) == doctest::Approx(kolmogorov_quantile(0.01) / 10.0));
        CHECK_THROWS_AS(kolmogorov_quantile(0.0), invalid_argument);
    }

    TEST_CASE("KS size under the null is alpha")
    {
        Rng rng(60);
        const CsiErrorModel model{1.0};
        const Cdf cdf = [&](double x) { return model.magnitude_cdf(x); };
        const int trials = 20000;
        int rejects = 0;
        std::vector<double> x(200);
        for (int t = 0; t < trials; ++t)
        {
            for (double &v : x)
                v = std::abs(rng.complex_normal(1.0));
            rejects += ks_test(x, cdf, 0.01).reject ? 1 : 0;
        }
        CHECK(std::abs(static_cast<double>(rejects) / trials - 0.01) <= 0.01);
    }

    TEST_CASE("threshold calibration takes the empirical quantile of the maxima")
    {
        std::vector<double> m(100);
        for (int i = 0; i < 100; ++i)
            m[static_cast<std::size_t>(i)] = 99 - i;
        // floor(0.1 * 100) = 10 runs may exceed: threshold is the 11th largest.
        CHECK(calibrate_threshold(m, 0.1) == 89.0);
        CHECK(alarm_rate(m, 89.0) == doctest::Approx(0.10));
        CHECK(calibrate_threshold(m, 0.005) == 99.0);
        CHECK_THROWS_AS(calibrate_threshold(std::vector<double>(50, 1.0), 0.1), calibration_error);
        CHECK_THROWS_AS(calibrate_threshold([](std::size_t) { return 1.0; }, 0.1, 99), invalid_argument);

        Rng rng(3);
        const double thr = calibrate_threshold([&](std::size_t) { return -std::log(1.0 - rng.uniform()); }, 0.1, 20000);
        CHECK(thr == doctest::Approx(std::log(10.0)).epsilon(0.03));
        std::vector<double> fresh(20000);
        for (double &v : fresh)
            v = -std::log(1.0 - rng.uniform());
        const RocPoint p = evaluate_detection(fresh, std::vector<double>(10, 1e9), thr, 50);
        CHECK(p.false_positive_rate == doctest::Approx(0.1).epsilon(0.1));
        CHECK(p.detection_probability == 1.0);
        CHECK(p.n_samples_used == 50);
    }

    TEST_CASE("sample-size search")
    {
        const auto grid = sample_size_grid();
        CHECK(grid.front() == 10);
        CHECK(grid[1] == 15);
        CHECK(std::find(grid.begin(), grid.end(), 300) != grid.end());
        CHECK(grid.back() == 10000);

        auto exp_miss = [](std::size_t m) { return MissEstimate{std::exp(-static_cast<double>(m) / 50.0), 0.5}; };
        // exp(-m/50) <= 0.1  <=>  m >= 50 ln 10 = 115.1
        CHECK(min_samples_for_miss(exp_miss, 0.1).m_min == 116);
        CHECK(min_samples_for_miss(exp_miss, 0.5).m_min == 35);
        CHECK(min_samples_for_miss(exp_miss, 0.9).m_min == 10);
        CHECK_THROWS_AS(min_samples_for_miss([](std::size_t) { return MissEstimate{0.5, 0.0}; }, 0.1), not_achievable);
    }

    TEST_CASE("detector names round trip")
    {
        for (auto d : {DetectorKind::cusum, DetectorKind::ks, DetectorKind::oracle})
            CHECK(detector_kind_from_string(to_string(d)) == d);
        CHECK_THROWS_AS(detector_kind_from_string("gan"), invalid_argument);
    }
}
