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

#include "beamsec/errors.hpp"
#include "beamsec/experiments.hpp"

#include "oracles.hpp"

#include <cmath>

using namespace beamsec;

TEST_SUITE("experiments")
{
    TEST_CASE("closed-form rate reduction at 10 dB")
    {
        const double r0 = oracle::shannon_rate(10.0);
        const double expect[] = {8.63, 17.04, 25.20, 33.04};
        for (int i = 0; i < 4; ++i)
        {
            const double x = 0.1 * (i + 1);
            const double direct = 100.0 * (1.0 - oracle::shannon_rate(std::pow(10.0, (10.0 - 10.0 * x) / 10.0)) / r0);
            CHECK(closed_form_rate_reduction_pct(10.0, x) == doctest::Approx(direct).epsilon(1e-12));
            CHECK(std::abs(direct - expect[i]) < 0.01);
        }
    }

    TEST_CASE("rate sweep reductions grow with the degradation")
    {
        RateSweepConfig cfg;
        cfg.n_channels = 1000;
        const RateSweepResult r = run_rate_sweep(cfg);
        REQUIRE(r.rows.size() == 4);
        for (std::size_t i = 1; i < r.rows.size(); ++i)
            CHECK(r.rows[i].reduction_pct > r.rows[i - 1].reduction_pct);
        for (const auto &row : r.rows)
            CHECK(row.mean_rate_attacked < row.mean_rate_clean);
        const RateSweepResult again = run_rate_sweep(cfg);
        CHECK(again.rows[2].mean_rate_attacked == r.rows[2].mean_rate_attacked);
    }

    TEST_CASE("receiver population")
    {
        Rng rng(1);
        const ReceiverPopulation pop = make_receiver_population(50, 2.0, 8.0, 1.0, rng);
        REQUIRE(pop.size() == 50);
        for (std::size_t r = 0; r < 50; ++r)
        {
            CHECK(pop.distance[r] >= 2.0);
            CHECK(pop.distance[r] <= 8.0);
            CHECK(std::abs(pop.angle[r]) <= 1.0);
        }
        CHECK(pop.nominal_snr_db(0, 10.0, 64) ==
              doctest::Approx(10.0 + 10 * std::log10(64.0) - 20 * std::log10(pop.distance[0])));
        CHECK_THROWS_AS(make_receiver_population(0, 2, 8, 1, rng), invalid_argument);
        CHECK_THROWS_AS(make_receiver_population(5, 0.5, 8, 1, rng), invalid_argument);
    }

    TEST_CASE("GLR-CUSUM harness: calibrated innovations and monotone traces")
    {
        CusumExperimentConfig cfg;
        const CusumExperiment exp(cfg);
        double s = 0, s2 = 0, sa = 0;
        std::size_t n = 0;
        for (std::uint64_t seed = 0; seed < 60; ++seed)
        {
            for (double z : exp.innovations(false, seed))
            {
                s += z;
                s2 += z * z;
                ++n;
            }
            for (double z : exp.innovations(true, seed))
                sa += z;
        }
        const double mean = s / static_cast<double>(n);
        CHECK(std::abs(mean) < 0.1);
        CHECK(s2 / static_cast<double>(n) - mean * mean == doctest::Approx(1.0).epsilon(0.1));
        CHECK(sa / static_cast<double>(n) < -0.1);

        const auto trace = exp.run_trace(true, 5);
        REQUIRE(trace.size() == cfg.max_samples);
        for (std::size_t t = 1; t < trace.size(); ++t)
            CHECK(trace[t] >= trace[t - 1]);
        CHECK(exp.run_trace(true, 5) == trace);
    }

    TEST_CASE("GLR-CUSUM detection grows with the number of samples")
    {
        CusumExperimentConfig cfg;
        cfg.min_samples = 25;
        cfg.max_samples = 200;
        const CusumExperiment exp(cfg);
        const CusumEvaluation ev = exp.evaluate(101, 202, 400, 300);
        auto at = [&](std::size_t n) { return ev.per_length[n - cfg.min_samples].detection_probability; };
        CHECK(at(25) < at(50));
        CHECK(at(50) < at(100));
        CHECK(at(100) < at(200));
        for (const RocPoint &p : ev.per_length)
            CHECK(p.false_positive_rate < 0.2);
    }

    TEST_CASE("KS harness: monotone in magnitude and sample count")
    {
        KsExperimentConfig cfg;
        cfg.n_episodes = 300;
        const KsExperiment exp(cfg);
        const MissEstimate weak = exp.estimate(100, 0.08, 3);
        const MissEstimate strong = exp.estimate(100, 0.16, 3);
        CHECK(strong.miss < weak.miss);
        CHECK(strong.detection > weak.detection);
        CHECK(exp.estimate(200, 0.12, 4).miss < exp.estimate(40, 0.12, 4).miss);
        const double h0 = exp.h0_rejection_rate(120, 4000, 9);
        CHECK(std::abs(h0 - cfg.alpha) <= 0.01);
        Rng a(1), b(1);
        CHECK(exp.draw_samples(77, 0.1, a) == exp.draw_samples(77, 0.1, b));
    }
}
