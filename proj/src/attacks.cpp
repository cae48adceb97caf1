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

#include "beamsec/attacks.hpp"

#include "beamsec/beamforming.hpp"
#include "beamsec/errors.hpp"

#include <cmath>
#include <numbers>

namespace beamsec
{

std::string_view to_string(AttackVector v) noexcept
{
    switch (v)
    {
    case AttackVector::csi_phase_spoof:
        return "csi_phase_spoof";
    case AttackVector::pilot_contamination:
        return "pilot_contamination";
    case AttackVector::fake_report:
        return "fake_report";
    }
    return "unknown";
}

AttackVector attack_vector_from_string(std::string_view s)
{
    if (s == "csi_phase_spoof")
        return AttackVector::csi_phase_spoof;
    if (s == "pilot_contamination")
        return AttackVector::pilot_contamination;
    if (s == "fake_report")
        return AttackVector::fake_report;
    throw invalid_argument("unknown attack vector '" + std::string(s) + "'");
}

void AttackConfig::validate() const
{
    if (!(magnitude >= 0.0) || !std::isfinite(magnitude))
        throw invalid_argument("AttackConfig: magnitude must be finite and >= 0");
    if (schedule.period < 1)
        throw invalid_argument("AttackConfig: period must be >= 1");
    if (schedule.duration < 0)
        throw invalid_argument("AttackConfig: duration must be >= 0");
    if (schedule.duration > schedule.period)
        throw invalid_argument("AttackConfig: duration must be <= period");
    if (vector == AttackVector::fake_report && magnitude > 1.0)
        throw invalid_argument("AttackConfig: fake_report rate must be <= 1");
}

bool apply_schedule(const AttackConfig &cfg, std::int64_t slot)
{
    const AttackSchedule &s = cfg.schedule;
    if (slot < s.start_slot)
        return false;
    return (slot - s.start_slot) % s.period < s.duration;
}

std::int64_t burst_index(const AttackSchedule &s, std::int64_t slot)
{
    return (slot - s.start_slot) / s.period;
}

const std::array<AttackCatalogEntry, 6> &attack_catalog() noexcept
{
    static const std::array<AttackCatalogEntry, 6> catalog{{
        {1, "Adaptive modulation and coding",
         "push the MCS controller into wrong modulation/coding choices",
         "fake receiver feedback on reception quality; not simulated (no MCS tables at this layer)", false},
        {2, "Channel coding",
         "degrade a learned channel decoder / joint source-channel coder",
         "adversarial perturbation of received symbols; not simulated (block-level PHY abstraction)", false},
        {3, "Beam formation",
         "misdirect codeword selection so the beam misses the device",
         "CSI phase spoofing of the reported matrix (spoof_csi_phase)", true},
        {4, "Channel condition assessment",
         "corrupt the channel estimate the base station forms from pilots",
         "pilot contamination by a pilot-aligned modulated signal (contaminate_pilot)", true},
        {5, "Signal strength",
         "exceed transmitter capabilities and reduce the rate",
         "broadcast modulated radio signal and position spoofing (forge_report, degrade_snr)", true},
        {6, "Planning and resource allocation",
         "misclassification in the scheduler, raising error counts",
         "data falsification and fake requests to the planner; not simulated (no scheduler model)", false},
    }};
    return catalog;
}

CsiReport spoof_csi_phase(const CsiReport &report, double delta_max, Rng &rng)
{
    if (!(delta_max >= 0.0))
        throw invalid_argument("spoof_csi_phase: delta_max must be >= 0");
    CsiReport out = report;
    if (delta_max > 0.0)
        for (cd &v : out.h_hat.data())
            v *= std::polar(1.0, rng.uniform(-delta_max, delta_max));
    out.tampered = true;
    out.refresh_phase();
    return out;
}

ReceivedSignal contaminate_pilot(const ReceivedSignal &sig, const ChannelState &g_attacker, double power,
                                 const CVector &attacker_symbols)
{
    if (!(power >= 0.0))
        throw invalid_argument("contaminate_pilot: power must be >= 0");
    if (g_attacker.n_ant() != sig.n_ant || attacker_symbols.size() != sig.n_pilot())
        throw invalid_argument("contaminate_pilot: dimension mismatch");
    ReceivedSignal out = sig;
    if (power == 0.0)
        return out;
    const double amp = std::sqrt(power);
    const auto g = g_attacker.column(0);
    for (std::size_t t = 0; t < sig.n_pilot(); ++t)
        for (std::size_t k = 0; k < sig.n_ant; ++k)
            out.at(k, t) += amp * g[k] * attacker_symbols[t];
    return out;
}

CsiReport forge_report(const CsiReport &tmpl, const ForgeStrategy &strategy, Rng &rng)
{
    CsiReport out = tmpl;
    const std::size_t n_ant = tmpl.h_hat.n_ant();
    std::visit(
        [&](const auto &s) {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, ReplayOld>)
            {
                if (!s.use_template)
                {
                    if (s.stale.n_ant() != n_ant || s.stale.n_sub() != tmpl.h_hat.n_sub())
                        throw invalid_argument("forge_report: stale CSI dimensions differ from template");
                    out.h_hat = s.stale;
                }
            }
            else if constexpr (std::is_same_v<S, RandomPhase>)
            {
                for (cd &v : out.h_hat.data())
                    v = std::polar(std::abs(v), rng.uniform(-std::numbers::pi, std::numbers::pi));
            }
            else
            {
                const CVector a = steering_vector(s.theta, n_ant);
                const double scale = std::sqrt(tmpl.h_hat.frobenius_norm2() / static_cast<double>(tmpl.h_hat.n_sub()));
                for (std::size_t m = 0; m < tmpl.h_hat.n_sub(); ++m)
                    for (std::size_t k = 0; k < n_ant; ++k)
                        out.h_hat(k, m) = scale * a[k];
            }
        },
        strategy);
    out.tampered = true;
    out.refresh_phase();
    return out;
}

double degrade_snr(double snr_linear, double fraction)
{
    if (!(snr_linear > 0.0))
        return 0.0;
    if (!(fraction >= 0.0 && fraction <= 1.0))
        throw invalid_argument("degrade_snr: fraction must be in [0, 1]");
    const double db = to_db(snr_linear);
    return from_db(db - fraction * std::abs(db));
}

double coding_attack_power_factor(double nominal_snr_db, double fraction)
{
    if (!(fraction >= 0.0))
        throw invalid_argument("coding_attack_power_factor: fraction must be >= 0");
    return from_db(-fraction * std::abs(nominal_snr_db));
}

} // namespace beamsec
