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

#include "beamsec/attacks.hpp"
#include "beamsec/beamforming.hpp"
#include "beamsec/csi.hpp"
#include "beamsec/errors.hpp"

#include "oracles.hpp"

#include <cmath>
#include <numbers>

using namespace beamsec;

namespace
{

std::vector<std::vector<cd>> as_vectors(const Codebook &cb)
{
    std::vector<std::vector<cd>> out;
    for (const Codeword &c : cb.codewords)
        out.emplace_back(c.weights().begin(), c.weights().end());
    return out;
}

ChannelState from_vector(const std::vector<cd> &v)
{
    ChannelState h(v.size(), 1);
    std::copy(v.begin(), v.end(), h.column(0).begin());
    return h;
}

} // namespace

TEST_SUITE("beamforming")
{
    TEST_CASE("DFT codebook matches the reference beams and is orthonormal")
    {
        const Codebook cb = dft_codebook(16, 16);
        cb.validate();
        REQUIRE(cb.size() == 16);
        for (std::size_t b = 0; b < 16; ++b)
        {
            CHECK(std::sin(cb.beam_angles[b]) == doctest::Approx(-1.0 + 2.0 * b / 16.0));
            const auto ref = oracle::dft_beam(b, 16, 16);
            for (std::size_t k = 0; k < 16; ++k)
                CHECK(std::abs(cb.codewords[b].weights()[k] - ref[k]) < 1e-12);
            for (std::size_t c = 0; c < 16; ++c)
            {
                cd ip = 0;
                for (std::size_t k = 0; k < 16; ++k)
                    ip += std::conj(cb.codewords[b].weights()[k]) * cb.codewords[c].weights()[k];
                CHECK(std::abs(ip - (b == c ? 1.0 : 0.0)) < 1e-12);
            }
        }
    }

    TEST_CASE("codeword invariants")
    {
        CHECK_THROWS_AS(Codeword::array({1.0, 1.0}), invalid_argument);
        const Codeword r = Codeword::ris({0.0, 1.0, 2.0, 3.0});
        CHECK(r.kind() == CodewordKind::ris);
        for (const cd &w : r.weights())
            CHECK(std::abs(w) == doctest::Approx(0.5));
        for (const cd &e : r.ris_entries())
            CHECK(std::abs(e) == doctest::Approx(1.0));
        const Codebook ris = ris_codebook(8, 8);
        const Codebook dft = dft_codebook(8, 8);
        for (std::size_t b = 0; b < 8; ++b)
            for (std::size_t k = 0; k < 8; ++k)
                CHECK(std::abs(ris.codewords[b].weights()[k] - dft.codewords[b].weights()[k]) < 1e-12);
    }

    TEST_CASE("beam selection agrees with the exhaustive oracle")
    {
        Rng rng(99);
        for (int trial = 0; trial < 300; ++trial)
        {
            const std::size_t n = 4 + rng.below(61);
            const std::size_t beams = 1 + rng.below(2 * n);
            const Codebook cb = dft_codebook(n, beams);
            const ChannelState h = sample_rayleigh_block(n, 1 + rng.below(3), 1.0, rng);
            std::vector<cd> col(h.column(0).begin(), h.column(0).end());
            double gain = 0;
            const std::size_t expect = oracle::best_beam(as_vectors(cb), col, &gain);
            const BeamChoice got = select_beam(cb, h);
            CHECK(got.index == expect);
            CHECK(got.gain == doctest::Approx(gain).epsilon(1e-12));
        }
    }

    TEST_CASE("ties go to the lowest index")
    {
        const Codebook cb = dft_codebook(8, 8);
        std::vector<cd> h(8, 0.0);
        for (std::size_t k = 0; k < 8; ++k)
            h[k] = cb.codewords[5].weights()[k] + cb.codewords[2].weights()[k];
        CHECK(select_beam(cb, from_vector(h)).index == 2);
        CHECK(select_beam(cb, ChannelState(8, 1)).index == 0);
    }

    TEST_CASE("matched LoS beam collects the full array gain")
    {
        const Codebook cb = dft_codebook(64, 64);
        PathSet ps;
        ps.paths.push_back(make_path(cb.beam_angles[40], 6.0));
        const ChannelState h = generate_channel(ps, 64);
        const BeamChoice b = select_beam(cb, h);
        CHECK(b.index == 40);
        CHECK(b.gain == doctest::Approx(64.0 * std::pow(10.0, -0.6)).epsilon(1e-12));
        const LinkBudget lb{10.0, 2.0, 0.0};
        CHECK(realized_snr(h, cb.codewords[40], lb) == doctest::Approx(10.0 * b.gain / 2.0).epsilon(1e-12));
    }

    TEST_CASE("rate and dB helpers")
    {
        CHECK(achievable_rate(0.0) == 0.0);
        CHECK(achievable_rate(1.0) == doctest::Approx(1.0));
        CHECK(achievable_rate(3.0) == doctest::Approx(2.0));
        CHECK(achievable_rate(10.0) == doctest::Approx(oracle::shannon_rate(10.0)));
        CHECK_THROWS_AS(achievable_rate(-0.1), invalid_argument);
        CHECK(to_db(from_db(13.7)) == doctest::Approx(13.7));
        CHECK(from_db(10.0) == doctest::Approx(10.0));
    }
}

TEST_SUITE("csi")
{
    TEST_CASE("Chu pilot has unit modulus and ideal cyclic autocorrelation")
    {
        for (std::size_t n : {1u, 7u, 8u, 13u})
        {
            const CVector p = make_pilot(n);
            for (const cd &s : p)
                CHECK(std::abs(s) == doctest::Approx(1.0));
            for (std::size_t lag = 1; lag < n; ++lag)
            {
                cd acc = 0;
                for (std::size_t t = 0; t < n; ++t)
                    acc += p[t] * std::conj(p[(t + lag) % n]);
                CHECK(std::abs(acc) < 1e-9);
            }
        }
    }

    TEST_CASE("noiseless LS estimate is exact")
    {
        Rng rng(4);
        const ChannelState h = sample_rayleigh_block(16, 1, 1.0, rng);
        const CsiReport rep = estimate_csi(transmit_pilot(h, make_pilot(8), 0.0, rng));
        for (std::size_t k = 0; k < 16; ++k)
            CHECK(std::abs(rep.h_hat(k, 0) - h(k, 0)) < 1e-12);
        for (std::size_t k = 0; k < 16; ++k)
            CHECK(rep.phase_shift[k] == doctest::Approx(std::arg(h(k, 0))));
    }

    TEST_CASE("LS error variance is noise_var / n_pilot")
    {
        Rng rng(6);
        const CVector pilot = make_pilot(8);
        const double noise = 0.4;
        double err = 0;
        std::size_t n = 0;
        for (int t = 0; t < 2000; ++t)
        {
            const ChannelState h = sample_rayleigh_block(32, 1, 1.0, rng);
            const CsiReport rep = estimate_csi(transmit_pilot(h, pilot, noise, rng));
            for (double e : csi_error_samples(rep, h))
            {
                err += e * e;
                ++n;
            }
        }
        CHECK(err / static_cast<double>(n) == doctest::Approx(ls_error_model(noise, 8).sigma_e2).epsilon(0.03));
    }

    TEST_CASE("error magnitude CDF is Rayleigh")
    {
        const CsiErrorModel m{0.5};
        CHECK(m.magnitude_cdf(0.0) == 0.0);
        CHECK(m.magnitude_cdf(-1.0) == 0.0);
        CHECK(m.magnitude_cdf(std::sqrt(0.5)) == doctest::Approx(1.0 - std::exp(-1.0)));
    }

    TEST_CASE("pilot preconditions")
    {
        Rng rng(1);
        const ChannelState h(4, 1);
        CHECK_THROWS_AS(transmit_pilot(h, {cd(2.0, 0.0)}, 0.1, rng), invalid_argument);
        CHECK_THROWS_AS(transmit_pilot(h, make_pilot(4), -1.0, rng), invalid_argument);
        CHECK_THROWS_AS(make_pilot(0), invalid_argument);
    }

    TEST_CASE("wideband estimate runs one burst per subcarrier")
    {
        Rng rng(12);
        const ChannelState h = sample_rayleigh_block(8, 5, 1.0, rng);
        ReceivedSignal first;
        const CsiReport rep = estimate_wideband(h, make_pilot(4), 0.0, rng, &first);
        for (std::size_t m = 0; m < 5; ++m)
            for (std::size_t k = 0; k < 8; ++k)
                CHECK(std::abs(rep.h_hat(k, m) - h(k, m)) < 1e-12);
        REQUIRE(first.n_pilot() == 4);
        CHECK(std::abs(first.at(3, 2) - h(3, 0) * first.pilot[2]) < 1e-12);
    }
}

TEST_SUITE("attacks")
{
    TEST_CASE("schedule")
    {
        AttackConfig cfg;
        cfg.schedule = {10, 100, 20};
        CHECK_FALSE(apply_schedule(cfg, 9));
        CHECK(apply_schedule(cfg, 10));
        CHECK(apply_schedule(cfg, 29));
        CHECK_FALSE(apply_schedule(cfg, 30));
        CHECK(apply_schedule(cfg, 115));
        CHECK(burst_index(cfg.schedule, 115) == 1);
        cfg.schedule = {0, 10, 11};
        CHECK_THROWS_AS(cfg.validate(), invalid_argument);
    }

    TEST_CASE("phase spoofing keeps magnitudes and bounds the rotation")
    {
        Rng rng(21);
        const ChannelState h = sample_rayleigh_block(64, 2, 1.0, rng);
        CsiReport rep;
        rep.h_hat = h;
        rep.refresh_phase();
        const CsiReport same = spoof_csi_phase(rep, 0.0, rng);
        CHECK(same.h_hat == h);
        const double delta = 0.3;
        const CsiReport sp = spoof_csi_phase(rep, delta, rng);
        CHECK(sp.tampered);
        for (std::size_t i = 0; i < h.data().size(); ++i)
        {
            CHECK(std::abs(sp.h_hat.data()[i]) == doctest::Approx(std::abs(h.data()[i])).epsilon(1e-12));
            CHECK(std::abs(std::arg(sp.h_hat.data()[i] / h.data()[i])) <= delta + 1e-12);
        }
        CHECK_THROWS_AS(spoof_csi_phase(rep, -0.1, rng), invalid_argument);
    }

    TEST_CASE("contamination shifts the LS estimate by the attacker channel")
    {
        Rng rng(2);
        const CVector pilot = make_pilot(8);
        const ChannelState h = sample_rayleigh_block(16, 1, 1.0, rng);
        const ChannelState g = sample_rayleigh_block(16, 1, 1.0, rng);
        const ReceivedSignal sig = transmit_pilot(h, pilot, 0.0, rng);
        const CsiReport clean = estimate_csi(contaminate_pilot(sig, g, 0.0, pilot));
        const CsiReport hit = estimate_csi(contaminate_pilot(sig, g, 4.0, pilot));
        for (std::size_t k = 0; k < 16; ++k)
        {
            CHECK(std::abs(clean.h_hat(k, 0) - h(k, 0)) < 1e-12);
            CHECK(std::abs(hit.h_hat(k, 0) - (h(k, 0) + 2.0 * g(k, 0))) < 1e-12);
        }
    }

    TEST_CASE("forged reports")
    {
        Rng rng(5);
        CsiReport tmpl;
        tmpl.h_hat = sample_rayleigh_block(32, 1, 1.0, rng);
        tmpl.source_id = 7;
        tmpl.refresh_phase();
        CsiReport stale = tmpl;
        stale.h_hat = sample_rayleigh_block(32, 1, 1.0, rng);
        const CsiReport replay = forge_report(tmpl, ReplayOld{stale.h_hat, false}, rng);
        CHECK(replay.h_hat == stale.h_hat);
        CHECK(replay.source_id == 7);
        CHECK(replay.tampered);

        const Codebook cb = dft_codebook(32, 32);
        const CsiReport spoof = forge_report(tmpl, PositionSpoofAngle{cb.beam_angles[9]}, rng);
        CHECK(select_beam(cb, spoof.h_hat).index == 9);
        CHECK(spoof.h_hat.frobenius_norm2() == doctest::Approx(tmpl.h_hat.frobenius_norm2()).epsilon(1e-9));
        const CsiReport rnd = forge_report(tmpl, RandomPhase{}, rng);
        CHECK(rnd.h_hat.n_ant() == 32);
    }

    TEST_CASE("coding attack reads the degradation in dB")
    {
        CHECK(to_db(degrade_snr(from_db(10.0), 0.1)) == doctest::Approx(9.0));
        CHECK(to_db(degrade_snr(from_db(-10.0), 0.1)) == doctest::Approx(-11.0));
        CHECK(degrade_snr(from_db(7.0), 0.0) == doctest::Approx(from_db(7.0)));
        for (double s : {-5.0, 3.0, 17.0})
            for (double f : {0.1, 0.4})
                CHECK(from_db(s) * coding_attack_power_factor(s, f) ==
                      doctest::Approx(degrade_snr(from_db(s), f)).epsilon(1e-12));
        CHECK_THROWS_AS(degrade_snr(1.0, 1.5), invalid_argument);
    }

    TEST_CASE("catalog lists six directions, three simulated")
    {
        const auto &cat = attack_catalog();
        std::vector<int> implemented;
        for (const auto &e : cat)
            if (e.implemented)
                implemented.push_back(e.direction_id);
        CHECK(cat.size() == 6);
        CHECK(implemented == std::vector<int>{3, 4, 5});
    }

    TEST_CASE("vector names round trip")
    {
        for (auto v : {AttackVector::csi_phase_spoof, AttackVector::pilot_contamination, AttackVector::fake_report})
            CHECK(attack_vector_from_string(to_string(v)) == v);
        CHECK_THROWS_AS(attack_vector_from_string("jamming"), invalid_argument);
    }
}
