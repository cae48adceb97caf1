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

#ifndef BEAMSEC_ATTACKS_HPP
#define BEAMSEC_ATTACKS_HPP

#include "beamsec/csi.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

namespace beamsec
{

enum class AttackVector
{
    csi_phase_spoof,     // magnitude: max phase perturbation [rad]
    pilot_contamination, // magnitude: attacker power (linear, relative to the victim LoS power)
    fake_report          // magnitude: probability that a slot's report is forged
};

std::string_view to_string(AttackVector v) noexcept;
AttackVector attack_vector_from_string(std::string_view s);

struct AttackSchedule
{
    std::int64_t start_slot = 0;
    std::int64_t period = 1;
    std::int64_t duration = 1;
};

struct AttackConfig
{
    AttackVector vector = AttackVector::csi_phase_spoof;
    double magnitude = 0.0;
    AttackSchedule schedule;
    std::uint64_t rng_seed = 0;

    void validate() const;
};

/// True iff slot >= start and (slot - start) mod period < duration.
bool apply_schedule(const AttackConfig &cfg, std::int64_t slot);

// Index of the burst containing `slot`; meaningful only when apply_schedule is true.
std::int64_t burst_index(const AttackSchedule &s, std::int64_t slot);

struct AttackCatalogEntry
{
    int direction_id = 0;
    std::string_view name;
    std::string_view goal;
    std::string_view implementation_notes;
    bool implemented = false;
};

/// The six attack-research directions. Beam formation, channel condition
/// assessment and signal strength are simulated; the rest are catalogued.
const std::array<AttackCatalogEntry, 6> &attack_catalog() noexcept;

/// Multiplies every entry by e^{i d_k}, d_k ~ U(-delta_max, delta_max).
CsiReport spoof_csi_phase(const CsiReport &report, double delta_max, Rng &rng);

/// y'[:, t] = y[:, t] + sqrt(power) * g[:, 0] * s_a[t].
ReceivedSignal contaminate_pilot(const ReceivedSignal &sig, const ChannelState &g_attacker, double power,
                                 const CVector &attacker_symbols);

struct ReplayOld
{
    ChannelState stale; // CSI captured earlier; defaults to the template's own
    bool use_template = true;
};
struct RandomPhase
{
};
struct PositionSpoofAngle
{
    double theta = 0.0;
};
using ForgeStrategy = std::variant<ReplayOld, RandomPhase, PositionSpoofAngle>;

/// Fabricated report with the template's metadata and dimensions.
CsiReport forge_report(const CsiReport &tmpl, const ForgeStrategy &strategy, Rng &rng);

/// Coding attack on the link SNR, read as a fraction of the SNR in dB:
/// snr_db' = snr_db - fraction * |snr_db|. Fraction in [0, 1]; returns the linear SNR.
double degrade_snr(double snr_linear, double fraction);

// Linear power factor g applied by `degrade_snr` at a given nominal SNR in dB.
double coding_attack_power_factor(double nominal_snr_db, double fraction);

} // namespace beamsec

#endif
