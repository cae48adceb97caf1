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

#include "beamsec/scenario.hpp"

#include "beamsec/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <string>

namespace beamsec
{

namespace
{

constexpr double pi = std::numbers::pi;

// A ULA only resolves sin(theta); a vehicle behind the array maps to its mirror image.
double array_angle(double angle)
{
    return std::asin(std::clamp(std::sin(angle), -1.0, 1.0));
}

std::string vehicle_field(std::size_t i, const char *name)
{
    return "vehicles[" + std::to_string(i) + "]." + name;
}

} // namespace

void Vehicle::validate() const
{
    if (!(radius > 0.0) || !std::isfinite(radius))
        throw config_error("radius", "must be > 0");
    if (!std::isfinite(angular_speed) || !std::isfinite(phase0))
        throw config_error("angular_speed", "must be finite");
    if (attack)
        attack->validate();
}

VehiclePosition vehicle_position(const Vehicle &v, std::int64_t slot)
{
    // Reduce the turn count first so long runs keep full angular precision.
    double turns = v.angular_speed * static_cast<double>(slot) / (2.0 * pi);
    turns -= std::floor(turns);
    return {wrap_angle(v.phase0 + 2.0 * pi * turns), v.radius};
}

void ScenarioConfig::validate() const
{
    if (n_slots < 0)
        throw config_error("n_slots", "must be >= 0");
    if (!(slot_duration > 0.0))
        throw config_error("slot_duration", "must be > 0");
    if (!(bandwidth_hz > 0.0))
        throw config_error("bandwidth_hz", "must be > 0");
    if (!(carrier_freq_hz > 0.0))
        throw config_error("carrier_freq_hz", "must be > 0");
    if (!std::isfinite(link_budget.tx_power_db))
        throw config_error("link_budget.tx_power_db", "must be finite");
    if (!(link_budget.noise_power > 0.0))
        throw config_error("link_budget.noise_power", "must be > 0");
    if (n_ant == 0)
        throw config_error("n_ant", "must be >= 1");
    if (n_beams == 0)
        throw config_error("n_beams", "must be >= 1");
    if (n_pilot == 0)
        throw config_error("n_pilot", "must be >= 1");
    if (!(fading_rho >= 0.0 && fading_rho <= 1.0))
        throw config_error("fading_rho", "must lie in [0, 1]");
    if (std::isnan(diffuse_relative_db) || std::isnan(nlos_relative_db))
        throw config_error("diffuse_relative_db", "must not be NaN");
    if (identification_delay < 0)
        throw config_error("identification_delay", "must be >= 0");
    if (!(packet_size_bits > 0.0))
        throw config_error("packet_size_bits", "must be > 0");
    if (!(arrival_rate >= 0.0) || !std::isfinite(arrival_rate))
        throw config_error("arrival_rate", "must be >= 0");
    if (detection.window == 0)
        throw config_error("detection.window", "must be >= 1");
    if (!(detection.threshold > 0.0))
        throw config_error("detection.threshold", "must be > 0");
    if (!(detection.ks_alpha > 0.0 && detection.ks_alpha < 1.0))
        throw config_error("detection.ks_alpha", "must lie in (0, 1)");
    if (detection.ks_samples == 0)
        throw config_error("detection.ks_samples", "must be >= 1");
    for (std::size_t i = 0; i < vehicles.size(); ++i)
    {
        try
        {
            vehicles[i].validate();
        }
        catch (const config_error &e)
        {
            throw config_error(vehicle_field(i, e.field().c_str()), e.reason());
        }
        catch (const invalid_argument &e)
        {
            throw config_error(vehicle_field(i, "attack"), e.what());
        }
    }
}

ScenarioConfig default_scenario()
{
    ScenarioConfig cfg;
    const double radii[] = {15.0, 20.0, 25.0};
    for (std::size_t i = 0; i < 3; ++i)
    {
        Vehicle v;
        v.id = i;
        v.radius = radii[i];
        v.angular_speed = 2.0 * pi / 5000.0;
        v.phase0 = 2.0 * pi * static_cast<double>(i) / 3.0;
        AttackConfig a;
        a.vector = AttackVector::csi_phase_spoof;
        a.magnitude = pi;
        a.schedule = {static_cast<std::int64_t>(300 + 150 * i), 1000, 200};
        a.rng_seed = 100 + i;
        v.attack = a;
        cfg.vehicles.push_back(v);
    }
    return cfg;
}

World::World(ScenarioConfig cfg)
    : cfg_(std::move(cfg)), codebook_(dft_codebook(cfg_.n_ant, cfg_.n_beams)), pilot_(make_pilot(cfg_.n_pilot)),
      noise_var_(cfg_.link_budget.noise_power / cfg_.link_budget.tx_power_linear())
{
    cfg_.validate();
    if (!cfg_.pilot_noise)
        noise_var_ = 0.0;
    state_.reserve(cfg_.vehicles.size());
    for (std::size_t i = 0; i < cfg_.vehicles.size(); ++i)
    {
        VehicleState s;
        s.vehicle = cfg_.vehicles[i];
        s.rng = Rng(derive_seed(cfg_.rng_seed * 1024, i));
        if (s.vehicle.attack)
            s.attack_rng = Rng(derive_seed(s.vehicle.attack->rng_seed * 1024, cfg_.rng_seed));
        for (std::size_t l = 0; l < cfg_.n_nlos; ++l)
        {
            const double aod = s.rng.uniform(-pi / 2.0, pi / 2.0);
            s.nlos.paths.push_back(make_path(aod, -cfg_.nlos_relative_db, s.rng.uniform(-pi, pi)));
        }
        s.diffuse = ChannelState(cfg_.n_ant, 1);
        if (std::isfinite(cfg_.diffuse_relative_db))
            s.diffuse = sample_rayleigh_block(cfg_.n_ant, 1, from_db(cfg_.diffuse_relative_db), s.rng);
        s.cusum = CusumState(0.0, 1.0, cfg_.detection.window, cfg_.detection.threshold);
        s.queue.emplace_back(-1, s.vehicle.backlog);
        s.queued = s.vehicle.backlog;
        s.arrived = s.vehicle.backlog;
        state_.push_back(std::move(s));
    }
}

void World::step(MetricsLog &log)
{
    for (VehicleState &v : state_)
        log.push_back(step_vehicle(v));
    ++slot_;
}

MetricsRow World::step_vehicle(VehicleState &v)
{
    const std::int64_t slot = slot_;
    MetricsRow row;
    row.slot = slot;
    row.vehicle_id = v.vehicle.id;

    // Geometry: LoS at the vehicle angle plus fixed scatterers, all scaled by the LoS loss.
    const VehiclePosition pos = vehicle_position(v.vehicle, slot);
    const double aod = array_angle(pos.angle);
    const double los_db = std::max(
        0.0, free_space_path_loss_db(pos.distance, cfg_.carrier_freq_hz) - 2.0 * cfg_.link_budget.antenna_gain_dbi);
    const double los_amp = from_db(-los_db / 2.0);
    PathSet ps = v.nlos;
    ps.carrier_freq_hz = cfg_.carrier_freq_hz;
    for (Path &p : ps.paths)
        p = make_path(p.aod, p.path_loss_db + los_db, p.phase);
    ps.paths.insert(ps.paths.begin(), make_path(aod, los_db));
    ChannelState h = generate_channel(ps, cfg_.n_ant);

    if (std::isfinite(cfg_.diffuse_relative_db))
    {
        const FadingProcess proc{cfg_.fading_rho, from_db(cfg_.diffuse_relative_db), 0};
        v.diffuse = fading_step(v.diffuse, proc, v.rng);
        ChannelState d = v.diffuse;
        d *= los_amp;
        h += d;
    }
    h.set_block_id(slot);

    // Pilot burst, optional attack, LS estimate.
    const bool identifying = slot < v.identifying_until;
    const AttackConfig *atk = v.vehicle.attack ? &*v.vehicle.attack : nullptr;
    const bool attack_active = atk != nullptr && apply_schedule(*atk, slot) &&
                               burst_index(atk->schedule, slot) != v.cleared_burst;
    ReceivedSignal sig = transmit_pilot(h, pilot_, noise_var_, v.rng);
    if (attack_active && atk->vector == AttackVector::pilot_contamination)
    {
        // Attacker a quarter turn away with the same path loss, sending the public pilot.
        ChannelState g = generate_channel(PathSet{{make_path(array_angle(pos.angle + pi / 4.0), los_db)}},
                                          cfg_.n_ant);
        sig = contaminate_pilot(sig, g, atk->magnitude, pilot_);
    }
    CsiReport rep = estimate_csi(sig);
    rep.source_id = v.vehicle.id;
    rep.timestamp = slot;
    if (attack_active && atk->vector == AttackVector::csi_phase_spoof)
        rep = spoof_csi_phase(rep, atk->magnitude, v.attack_rng);
    else if (attack_active && atk->vector == AttackVector::fake_report)
        rep = forge_report(rep, PositionSpoofAngle{array_angle(pos.angle + atk->magnitude)}, v.attack_rng);

    // Detection on the reported CSI.
    bool alarm = false;
    if (cfg_.detection.enabled && !identifying)
    {
        switch (cfg_.detection.detector)
        {
        case DetectorKind::oracle:
            alarm = attack_active;
            break;
        case DetectorKind::cusum:
            if (v.previous)
            {
                const BeamChoice prev_beam = select_beam(codebook_, v.previous->h_hat);
                const double diffuse = std::isfinite(cfg_.diffuse_relative_db)
                                           ? (1.0 - cfg_.fading_rho * cfg_.fading_rho) *
                                                 from_db(cfg_.diffuse_relative_db) * los_amp * los_amp
                                           : 0.0;
                // Both the prediction and the new report carry LS error.
                const InnovationModel model{diffuse + 2.0 * noise_var_ / static_cast<double>(cfg_.n_pilot)};
                if (model.variance > 0.0)
                {
                    v.cusum.update(monitored_statistic(rep, v.previous->h_hat, codebook_.codewords[prev_beam.index],
                                                       model));
                    alarm = v.cusum.alarmed();
                }
            }
            break;
        case DetectorKind::ks:
        {
            const auto err = csi_error_samples(rep, h);
            v.ks_buffer.insert(v.ks_buffer.end(), err.begin(), err.end());
            if (v.ks_buffer.size() >= cfg_.detection.ks_samples && noise_var_ > 0.0)
            {
                v.ks_buffer.resize(cfg_.detection.ks_samples);
                const CsiErrorModel em = ls_error_model(noise_var_, cfg_.n_pilot);
                alarm = ks_test(v.ks_buffer, [em](double x) { return em.magnitude_cdf(x); }, cfg_.detection.ks_alpha)
                            .reject;
                v.ks_buffer.clear();
            }
            break;
        }
        }
    }

    bool outage = identifying;
    if (alarm)
    {
        // Identification: service outage, then the vehicle re-registers clean CSI.
        v.identifying_until = slot + cfg_.identification_delay;
        outage = cfg_.identification_delay > 0;
        if (atk != nullptr && apply_schedule(*atk, slot))
            v.cleared_burst = burst_index(atk->schedule, slot);
        v.cusum.reset();
        v.ks_buffer.clear();
        v.previous.reset();
    }
    else if (!identifying)
    {
        v.previous = rep;
    }

    // Beam from the report, SNR on the true channel.
    const BeamChoice beam = select_beam(codebook_, rep.h_hat);
    const double snr = realized_snr(h, codebook_.codewords[beam.index], cfg_.link_budget);
    const double rate = outage ? 0.0 : achievable_rate(snr);
    const double bits = rate * cfg_.slot_duration * cfg_.bandwidth_hz;
    std::uint64_t capacity = static_cast<std::uint64_t>(std::floor(bits / cfg_.packet_size_bits));

    // FIFO service of packets that arrived in earlier slots.
    std::uint64_t delivered = 0;
    double latency_sum = 0.0;
    while (capacity > 0 && !v.queue.empty())
    {
        auto &[arrival, count] = v.queue.front();
        const std::uint64_t take = std::min(capacity, count);
        delivered += take;
        latency_sum += static_cast<double>(take) * static_cast<double>(slot - arrival);
        capacity -= take;
        count -= take;
        if (count == 0)
            v.queue.pop_front();
    }
    v.queued -= delivered;

    // Arrivals at the end of the slot; overflow is dropped.
    std::uint64_t arrivals = 0;
    if (cfg_.poisson_arrivals)
    {
        arrivals = v.rng.poisson(cfg_.arrival_rate);
    }
    else
    {
        v.arrival_credit += cfg_.arrival_rate;
        arrivals = static_cast<std::uint64_t>(std::floor(v.arrival_credit));
        v.arrival_credit -= static_cast<double>(arrivals);
    }
    const std::uint64_t room = cfg_.queue_capacity > v.queued ? cfg_.queue_capacity - v.queued : 0;
    const std::uint64_t admitted = std::min(arrivals, room);
    if (admitted > 0)
        v.queue.emplace_back(slot, admitted);
    v.queued += admitted;
    v.arrived += arrivals;
    v.delivered += delivered;
    v.dropped += arrivals - admitted;

    row.snr_db = to_db(snr);
    row.rate = rate;
    row.queued = v.queued;
    row.delivered = delivered;
    row.dropped = arrivals - admitted;
    row.latency = delivered > 0 ? latency_sum / static_cast<double>(delivered) : 0.0;
    row.attack_active = attack_active;
    row.alarm = alarm;
    row.identifying = outage;
    return row;
}

MetricsLog run(const ScenarioConfig &cfg)
{
    World world(cfg);
    MetricsLog log;
    log.reserve(static_cast<std::size_t>(cfg.n_slots) * cfg.vehicles.size());
    for (std::int64_t t = 0; t < cfg.n_slots; ++t)
        world.step(log);
    return log;
}

ScenarioSummary summarize(const MetricsLog &log)
{
    if (log.empty())
        throw invalid_argument("summarize: empty log");

    struct Acc
    {
        std::size_t slots = 0;
        double rate_sum = 0.0;
        double latency_sum = 0.0;
        std::uint64_t delivered = 0;
        std::uint64_t dropped = 0;
        bool attacked = false;
        bool was_active = false;
        std::int64_t onset = -1; // open burst awaiting an alarm
        double post_latency_sum = 0.0;
        std::uint64_t post_delivered = 0;
        std::size_t onsets = 0;
        std::size_t detected = 0;
        double delay_sum = 0.0;
    };
    std::map<std::size_t, Acc> acc;

    for (const MetricsRow &r : log)
    {
        Acc &a = acc[r.vehicle_id];
        ++a.slots;
        a.rate_sum += r.rate;
        a.delivered += r.delivered;
        a.dropped += r.dropped;
        a.latency_sum += r.latency * static_cast<double>(r.delivered);
        if (r.attack_active && !a.was_active)
        {
            a.attacked = true;
            ++a.onsets;
            a.onset = r.slot;
        }
        if (r.alarm && a.onset >= 0)
        {
            ++a.detected;
            a.delay_sum += static_cast<double>(r.slot - a.onset);
            a.onset = -1;
        }
        if (!r.attack_active && !r.alarm)
            a.onset = -1;
        a.was_active = r.attack_active;
        if (a.attacked)
        {
            a.post_latency_sum += r.latency * static_cast<double>(r.delivered);
            a.post_delivered += r.delivered;
        }
    }

    ScenarioSummary s;
    std::size_t slots = 0;
    double latency_sum = 0.0;
    double post_sum = 0.0;
    std::uint64_t post_delivered = 0;
    std::size_t detected = 0;
    double delay_sum = 0.0;
    std::uint64_t delivered = 0;
    std::uint64_t dropped = 0;
    for (const auto &[id, a] : acc)
    {
        VehicleSummary v;
        v.vehicle_id = id;
        v.mean_rate = static_cast<double>(a.delivered) / static_cast<double>(a.slots);
        v.mean_spectral_efficiency = a.rate_sum / static_cast<double>(a.slots);
        v.mean_latency = a.delivered > 0 ? a.latency_sum / static_cast<double>(a.delivered) : 0.0;
        v.drop_rate = a.delivered + a.dropped > 0
                          ? static_cast<double>(a.dropped) / static_cast<double>(a.delivered + a.dropped)
                          : 0.0;
        v.post_onset_latency = a.post_delivered > 0 ? a.post_latency_sum / static_cast<double>(a.post_delivered) : 0.0;
        v.onsets = a.onsets;
        v.detected = a.detected;
        v.detection_delay = a.detected > 0 ? a.delay_sum / static_cast<double>(a.detected) : 0.0;
        v.delivered = a.delivered;
        v.dropped = a.dropped;
        s.vehicles.push_back(v);

        slots += a.slots;
        s.mean_spectral_efficiency += a.rate_sum;
        latency_sum += a.latency_sum;
        post_sum += a.post_latency_sum;
        post_delivered += a.post_delivered;
        detected += a.detected;
        delay_sum += a.delay_sum;
        delivered += a.delivered;
        dropped += a.dropped;
    }
    s.mean_rate = static_cast<double>(delivered) / static_cast<double>(slots);
    s.mean_spectral_efficiency /= static_cast<double>(slots);
    s.mean_latency = delivered > 0 ? latency_sum / static_cast<double>(delivered) : 0.0;
    s.post_onset_latency = post_delivered > 0 ? post_sum / static_cast<double>(post_delivered) : 0.0;
    s.drop_rate = delivered + dropped > 0 ? static_cast<double>(dropped) / static_cast<double>(delivered + dropped) : 0.0;
    s.detection_delay = detected > 0 ? delay_sum / static_cast<double>(detected) : 0.0;
    return s;
}

} // namespace beamsec
