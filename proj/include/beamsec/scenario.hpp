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

#ifndef BEAMSEC_SCENARIO_HPP
#define BEAMSEC_SCENARIO_HPP

#include "beamsec/attacks.hpp"
#include "beamsec/beamforming.hpp"
#include "beamsec/detection.hpp"

#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

namespace beamsec
{

/// A transceiver moving on a circle centred on the base station.
struct Vehicle
{
    std::size_t id = 0;
    double radius = 20.0;        // [m]
    double angular_speed = 0.0;  // [rad/slot]
    double phase0 = 0.0;         // [rad]
    std::uint64_t backlog = 0;   // packets queued before slot 0
    std::optional<AttackConfig> attack;

    void validate() const;
};

struct VehiclePosition
{
    double angle = 0.0;    // seen from the base station, (-pi, pi]
    double distance = 0.0; // [m]
};

VehiclePosition vehicle_position(const Vehicle &v, std::int64_t slot);

struct DetectionConfig
{
    bool enabled = true;
    DetectorKind detector = DetectorKind::cusum;
    // GLR-CUSUM on the standardized beam-gain innovation.
    double threshold = 25.0;
    std::size_t window = 100;
    // KS test on |h_hat - h| against the LS error law.
    double ks_alpha = 1e-3;
    std::size_t ks_samples = 128;
};

struct ScenarioConfig
{
    std::int64_t n_slots = 5000;
    double slot_duration = 1e-3;   // [s]
    double bandwidth_hz = 20e6;
    double carrier_freq_hz = 24e9;
    std::vector<Vehicle> vehicles;
    // tx_power_db is relative to the receiver noise floor.
    LinkBudget link_budget{80.0, 1.0, 2.0};
    std::size_t n_ant = 64;
    std::size_t n_beams = 64;
    std::size_t n_pilot = 8;
    std::size_t n_nlos = 2;
    double nlos_relative_db = -10.0;
    // Diffuse Rayleigh component on top of the geometric paths.
    double fading_rho = 0.9;
    double diffuse_relative_db = -15.0;
    DetectionConfig detection;
    std::int64_t identification_delay = 20; // [slots]
    double packet_size_bits = 12000.0;
    double arrival_rate = 5.0;              // mean packets per slot
    bool poisson_arrivals = true;           // otherwise a fixed-rate stream
    bool pilot_noise = true;
    std::uint64_t queue_capacity = 5000;    // [packets]
    std::uint64_t rng_seed = 1;

    void validate() const;
};

/// Three vehicles on 15/20/25 m circles, each attacked for 200 of every
/// 1000 slots with staggered onsets.
ScenarioConfig default_scenario();

struct MetricsRow
{
    std::int64_t slot = 0;
    std::size_t vehicle_id = 0;
    double snr_db = 0.0;
    double rate = 0.0; // served spectral efficiency [bit/s/Hz]
    std::uint64_t queued = 0;
    std::uint64_t delivered = 0;
    std::uint64_t dropped = 0;
    double latency = 0.0; // mean over this slot's deliveries [slots]
    bool attack_active = false;
    bool alarm = false;
    bool identifying = false;

    bool operator==(const MetricsRow &) const = default;
};

using MetricsLog = std::vector<MetricsRow>;

/// Mutable per-vehicle state of a running scenario.
struct VehicleState
{
    Vehicle vehicle;
    PathSet nlos; // fixed scatterers, gains relative to the LoS path
    ChannelState diffuse;
    Rng rng{0};
    Rng attack_rng{0};
    double arrival_credit = 0.0;
    std::deque<std::pair<std::int64_t, std::uint64_t>> queue; // (arrival slot, count)
    std::uint64_t queued = 0;
    std::optional<CsiReport> previous; // last accepted report
    CusumState cusum{0.0, 1.0, 100, 1.0};
    std::vector<double> ks_buffer;
    std::int64_t identifying_until = -1; // exclusive
    std::int64_t cleared_burst = -1;     // burst index neutralized by identification
    std::uint64_t arrived = 0;
    std::uint64_t delivered = 0;
    std::uint64_t dropped = 0;
};

/// The simulated world. Stepping is a pure function of the state and slot.
class World
{
public:
    explicit World(ScenarioConfig cfg);

    const ScenarioConfig &config() const noexcept { return cfg_; }
    const std::vector<VehicleState> &vehicles() const noexcept { return state_; }
    std::int64_t next_slot() const noexcept { return slot_; }

    // Advances one slot and appends one row per vehicle to `log`.
    void step(MetricsLog &log);

private:
    MetricsRow step_vehicle(VehicleState &v);

    ScenarioConfig cfg_;
    Codebook codebook_;
    CVector pilot_;
    double noise_var_;
    std::vector<VehicleState> state_;
    std::int64_t slot_ = 0;
};

MetricsLog run(const ScenarioConfig &cfg);

struct VehicleSummary
{
    std::size_t vehicle_id = 0;
    double mean_rate = 0.0;           // delivered packets per slot
    double mean_spectral_efficiency = 0.0; // served bit/s/Hz per slot
    double mean_latency = 0.0;        // packet-weighted, 0 without deliveries
    double drop_rate = 0.0;           // dropped / (delivered + dropped)
    double post_onset_latency = 0.0;  // deliveries from the first onset on
    std::size_t onsets = 0;
    std::size_t detected = 0;         // onsets followed by an alarm in the burst
    double detection_delay = 0.0;     // mean slots onset -> alarm over detected onsets
    std::uint64_t delivered = 0;
    std::uint64_t dropped = 0;

    bool operator==(const VehicleSummary &) const = default;
};

struct ScenarioSummary
{
    std::vector<VehicleSummary> vehicles;
    double mean_rate = 0.0;          // delivered packets per slot and vehicle
    double mean_spectral_efficiency = 0.0;
    double mean_latency = 0.0;
    double post_onset_latency = 0.0; // over attacked vehicles
    double drop_rate = 0.0;
    double detection_delay = 0.0;    // over all detected onsets

    bool operator==(const ScenarioSummary &) const = default;
};

/// Aggregates a log. Onsets are the slots where attack_active turns on.
ScenarioSummary summarize(const MetricsLog &log);

} // namespace beamsec

#endif
