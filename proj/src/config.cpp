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

#include "beamsec/config.hpp"

#include "beamsec/errors.hpp"
#include "beamsec/output.hpp"

#include <set>
#include <type_traits>

namespace beamsec
{

namespace
{

using nlohmann::json;
using nlohmann::ordered_json;

// One field list per struct, shared by the reader and the writer.

template <typename V>
void fields(V &v, AttackSchedule &c)
{
    v("start_slot", c.start_slot);
    v("period", c.period);
    v("duration", c.duration);
}

template <typename V>
void fields(V &v, AttackConfig &c)
{
    v("vector", c.vector);
    v("magnitude", c.magnitude);
    v("schedule", c.schedule);
    v("rng_seed", c.rng_seed);
}

template <typename V>
void fields(V &v, Vehicle &c)
{
    v("id", c.id);
    v("radius", c.radius);
    v("angular_speed", c.angular_speed);
    v("phase0", c.phase0);
    v("backlog", c.backlog);
    v("attack", c.attack);
}

template <typename V>
void fields(V &v, LinkBudget &c)
{
    v("tx_power_db", c.tx_power_db);
    v("noise_power", c.noise_power);
    v("antenna_gain_dbi", c.antenna_gain_dbi);
}

template <typename V>
void fields(V &v, DetectionConfig &c)
{
    v("enabled", c.enabled);
    v("detector", c.detector);
    v("threshold", c.threshold);
    v("window", c.window);
    v("ks_alpha", c.ks_alpha);
    v("ks_samples", c.ks_samples);
}

template <typename V>
void fields(V &v, ScenarioConfig &c)
{
    v("n_slots", c.n_slots);
    v("slot_duration", c.slot_duration);
    v("bandwidth_hz", c.bandwidth_hz);
    v("carrier_freq_hz", c.carrier_freq_hz);
    v("vehicles", c.vehicles);
    v("link_budget", c.link_budget);
    v("n_ant", c.n_ant);
    v("n_beams", c.n_beams);
    v("n_pilot", c.n_pilot);
    v("n_nlos", c.n_nlos);
    v("nlos_relative_db", c.nlos_relative_db);
    v("fading_rho", c.fading_rho);
    v("diffuse_relative_db", c.diffuse_relative_db);
    v("detection", c.detection);
    v("identification_delay", c.identification_delay);
    v("packet_size_bits", c.packet_size_bits);
    v("arrival_rate", c.arrival_rate);
    v("poisson_arrivals", c.poisson_arrivals);
    v("pilot_noise", c.pilot_noise);
    v("queue_capacity", c.queue_capacity);
    v("rng_seed", c.rng_seed);
}

template <typename V>
void fields(V &v, RateSweepConfig &c)
{
    v("n_ant", c.n_ant);
    v("n_beams", c.n_beams);
    v("n_receivers", c.n_receivers);
    v("n_channels", c.n_channels);
    v("tx_power_db", c.tx_power_db);
    v("min_distance", c.min_distance);
    v("max_distance", c.max_distance);
    v("max_angle", c.max_angle);
    v("n_nlos", c.n_nlos);
    v("nlos_excess_loss_db", c.nlos_excess_loss_db);
    v("degradations", c.degradations);
    v("seed", c.seed);
}

template <typename V>
void fields(V &v, CusumExperimentConfig &c)
{
    v("n_ant", c.n_ant);
    v("n_beams", c.n_beams);
    v("n_pilot", c.n_pilot);
    v("rho", c.rho);
    v("degradation", c.degradation);
    v("window", c.window);
    v("target_fpr", c.target_fpr);
    v("min_samples", c.min_samples);
    v("max_samples", c.max_samples);
    v("n_runs", c.n_runs);
    v("n_h0_runs", c.n_h0_runs);
    v("target_detection", c.target_detection);
    v("population", c.population);
    v("seed", c.seed);
}

template <typename V>
void fields(V &v, KsExperimentConfig &c)
{
    v("n_ant", c.n_ant);
    v("n_pilot", c.n_pilot);
    v("channel_sigma2", c.channel_sigma2);
    v("tx_power_db", c.tx_power_db);
    v("alpha", c.alpha);
    v("tests_per_episode", c.tests_per_episode);
    v("n_episodes", c.n_episodes);
    v("delta", c.delta);
    v("fit_m", c.fit_m);
    v("fit_miss", c.fit_miss);
    v("seed", c.seed);
}

template <typename V>
void fields(V &v, DatasetConfig &c)
{
    v("n_records", c.n_records);
    v("n_ant", c.n_ant);
    v("n_sub", c.n_sub);
    v("n_pilot", c.n_pilot);
    v("n_paths", c.n_paths);
    v("subcarrier_spacing_hz", c.subcarrier_spacing_hz);
    v("max_delay_s", c.max_delay_s);
    v("tx_power_db", c.tx_power_db);
    v("genuine_fraction", c.genuine_fraction);
    v("spoof_delta", c.spoof_delta);
    v("contamination_power", c.contamination_power);
    v("seed", c.seed);
}

template <typename V>
void fields(V &v, Config &c)
{
    v("sweep", c.sweep);
    v("cusum", c.cusum);
    v("ks", c.ks);
    v("scenario", c.scenario);
    v("dataset", c.dataset);
}

// ---------------------------------------------------------------- reading

void read_value(const json &j, const std::string &path, double &out);
void read_value(const json &j, const std::string &path, bool &out);
void read_value(const json &j, const std::string &path, AttackVector &out);
void read_value(const json &j, const std::string &path, DetectorKind &out);

template <typename T>
    requires std::is_integral_v<T> && (!std::is_same_v<T, bool>)
void read_value(const json &j, const std::string &path, T &out)
{
    if (!j.is_number_integer())
        throw config_error(path, "expected an integer");
    if constexpr (std::is_unsigned_v<T>)
    {
        if (j.is_number_unsigned())
            out = j.get<T>();
        else if (j.get<std::int64_t>() >= 0)
            out = static_cast<T>(j.get<std::int64_t>());
        else
            throw config_error(path, "expected a non-negative integer");
    }
    else
    {
        if (j.is_number_unsigned() && j.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX))
            throw config_error(path, "integer out of range");
        out = j.get<T>();
    }
}

template <typename T>
void read_value(const json &j, const std::string &path, std::vector<T> &out);
template <typename T>
void read_value(const json &j, const std::string &path, std::optional<T> &out);
template <typename T>
    requires std::is_class_v<T>
void read_value(const json &j, const std::string &path, T &out);

class Reader
{
public:
    Reader(const json &obj, std::string path) : obj_(obj), path_(std::move(path)) {}

    template <typename T>
    void operator()(const char *key, T &out)
    {
        known_.insert(key);
        const auto it = obj_.find(key);
        if (it != obj_.end())
            read_value(*it, path_.empty() ? key : path_ + "." + key, out);
    }

    void reject_unknown() const
    {
        for (const auto &[k, _] : obj_.items())
            if (!known_.count(k))
                throw config_error(path_.empty() ? k : path_ + "." + k, "unknown key");
    }

private:
    const json &obj_;
    std::string path_;
    std::set<std::string> known_;
};

void read_value(const json &j, const std::string &path, double &out)
{
    if (!j.is_number())
        throw config_error(path, "expected a number");
    out = j.get<double>();
}

void read_value(const json &j, const std::string &path, bool &out)
{
    if (!j.is_boolean())
        throw config_error(path, "expected true or false");
    out = j.get<bool>();
}

void read_value(const json &j, const std::string &path, AttackVector &out)
{
    if (!j.is_string())
        throw config_error(path, "expected a string");
    try
    {
        out = attack_vector_from_string(j.get<std::string>());
    }
    catch (const invalid_argument &e)
    {
        throw config_error(path, e.what());
    }
}

void read_value(const json &j, const std::string &path, DetectorKind &out)
{
    if (!j.is_string())
        throw config_error(path, "expected a string");
    try
    {
        out = detector_kind_from_string(j.get<std::string>());
    }
    catch (const invalid_argument &e)
    {
        throw config_error(path, e.what());
    }
}

template <typename T>
void read_value(const json &j, const std::string &path, std::vector<T> &out)
{
    if (!j.is_array())
        throw config_error(path, "expected an array");
    std::vector<T> v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i)
        read_value(j[i], path + "[" + std::to_string(i) + "]", v[i]);
    out = std::move(v);
}

template <typename T>
void read_value(const json &j, const std::string &path, std::optional<T> &out)
{
    if (j.is_null())
    {
        out.reset();
        return;
    }
    T v{};
    read_value(j, path, v);
    out = std::move(v);
}

template <typename T>
    requires std::is_class_v<T>
void read_value(const json &j, const std::string &path, T &out)
{
    if (!j.is_object())
        throw config_error(path, "expected an object");
    Reader r(j, path);
    fields(r, out);
    r.reject_unknown();
}

// ---------------------------------------------------------------- writing

ordered_json write_value(double v) { return v; }
ordered_json write_value(bool v) { return v; }
ordered_json write_value(AttackVector v) { return std::string(to_string(v)); }
ordered_json write_value(DetectorKind v) { return std::string(to_string(v)); }

template <typename T>
    requires std::is_integral_v<T> && (!std::is_same_v<T, bool>)
ordered_json write_value(T v)
{
    return v;
}

template <typename T>
ordered_json write_value(const std::vector<T> &v);
template <typename T>
ordered_json write_value(const std::optional<T> &v);
template <typename T>
    requires std::is_class_v<T>
ordered_json write_value(const T &v);

class Writer
{
public:
    template <typename T>
    void operator()(const char *key, const T &v)
    {
        obj[key] = write_value(v);
    }

    ordered_json obj = ordered_json::object();
};

template <typename T>
ordered_json write_value(const std::vector<T> &v)
{
    ordered_json a = ordered_json::array();
    for (const auto &x : v)
        a.push_back(write_value(x));
    return a;
}

template <typename T>
ordered_json write_value(const std::optional<T> &v)
{
    return v ? write_value(*v) : ordered_json(nullptr);
}

template <typename T>
    requires std::is_class_v<T>
ordered_json write_value(const T &v)
{
    Writer w;
    T copy = v;
    fields(w, copy);
    return w.obj;
}

void validate_section(const char *section, auto &&fn)
{
    try
    {
        fn();
    }
    catch (const config_error &e)
    {
        throw config_error(std::string(section) + "." + e.field(), e.reason());
    }
    catch (const invalid_argument &e)
    {
        throw config_error(section, e.what());
    }
}

} // namespace

Config config_from_json(const nlohmann::json &doc)
{
    Config cfg;
    read_value(doc, "", cfg);
    validate_section("scenario", [&] { cfg.scenario.validate(); });
    validate_section("dataset", [&] { cfg.dataset.validate(); });
    validate_section("cusum", [&] { CusumExperiment probe(cfg.cusum); });
    validate_section("ks", [&] { KsExperiment probe(cfg.ks); });
    validate_section("sweep", [&] {
        if (cfg.sweep.n_channels == 0)
            throw config_error("n_channels", "must be >= 1");
        Rng rng(0);
        make_receiver_population(cfg.sweep.n_receivers, cfg.sweep.min_distance, cfg.sweep.max_distance,
                                 cfg.sweep.max_angle, rng);
    });
    return cfg;
}

nlohmann::ordered_json config_to_json(const Config &cfg)
{
    return write_value(cfg);
}

Config load_config(const std::filesystem::path &path)
{
    std::string text;
    try
    {
        text = read_text(path);
    }
    catch (const io_error &)
    {
        throw config_error("", "cannot read configuration file " + path.string());
    }
    json doc;
    try
    {
        doc = json::parse(text);
    }
    catch (const json::parse_error &e)
    {
        throw config_error("", path.string() + ": invalid JSON at byte " + std::to_string(e.byte));
    }
    if (doc.is_object() && doc.contains("manifest_version"))
    {
        if (!doc.contains("config"))
            throw config_error("config", path.string() + ": manifest has no configuration snapshot");
        return config_from_json(doc["config"]);
    }
    return config_from_json(doc);
}

} // namespace beamsec
