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

#include "beamsec/cli.hpp"
#include "beamsec/config.hpp"
#include "beamsec/dataset.hpp"
#include "beamsec/errors.hpp"
#include "beamsec/output.hpp"

#include <bit>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <limits>
#include <set>
#include <sstream>
#include <unistd.h>

using namespace beamsec;
namespace fs = std::filesystem;

namespace
{

struct TempDir
{
    fs::path path;
    TempDir()
    {
        static int counter = 0;
        path = fs::temp_directory_path() / ("beamsec-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

CsiDatasetRecord random_record(const DatasetShape &s, Rng &rng)
{
    CsiDatasetRecord r;
    r.label = static_cast<std::uint8_t>(rng.below(4));
    auto fill = [&](std::vector<float> &v, std::size_t n) {
        v.resize(n);
        for (float &f : v)
        {
            // Random bit patterns restricted to finite floats, including subnormals and -0.
            std::uint32_t bits = 0;
            do
                bits = static_cast<std::uint32_t>(rng.next_u64());
            while (!std::isfinite(std::bit_cast<float>(bits)));
            f = std::bit_cast<float>(bits);
        }
    };
    fill(r.y, s.y_floats());
    fill(r.h_reported, s.h_floats());
    fill(r.h_true, s.h_floats());
    return r;
}

bool bit_equal(const std::vector<float> &a, const std::vector<float> &b)
{
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(float)) == 0;
}

std::uint64_t format_offset(const std::vector<std::uint8_t> &bytes)
{
    try
    {
        decode_dataset(bytes);
    }
    catch (const format_error &e)
    {
        return e.offset();
    }
    FAIL("expected format_error");
    return 0;
}

int cli(const std::vector<std::string> &args, std::string *out = nullptr, std::string *err = nullptr)
{
    std::ostringstream o, e;
    const int rc = run_cli(args, o, e);
    if (out)
        *out = o.str();
    if (err)
        *err = e.str();
    return rc;
}

} // namespace

TEST_SUITE("dataset")
{
    TEST_CASE("empty dataset is header only")
    {
        CsiDataset ds;
        ds.shape = {4, 2, 3};
        const auto bytes = encode_dataset(ds);
        const std::string header = R"({"n_ant":4,"n_sub":2,"n_pilot":3,"n_records":0,"dtype":"f32"})";
        REQUIRE(bytes.size() == 10 + header.size());
        CHECK(std::memcmp(bytes.data(), "CSID", 4) == 0);
        CHECK(bytes[4] == 1);
        CHECK(bytes[5] == 0);
        CHECK(bytes[6] == header.size());
        CHECK(std::string(bytes.begin() + 10, bytes.end()) == header);
        const CsiDataset back = decode_dataset(bytes);
        CHECK(back.records.empty());
        CHECK(back.shape == ds.shape);
    }

    TEST_CASE("record layout is little-endian row-major")
    {
        CsiDataset ds;
        ds.shape = {2, 1, 1};
        CsiDatasetRecord r;
        r.label = 2;
        r.y = {1.0f, -2.0f, 0.5f, 0.0f};
        r.h_reported = {3.0f, 4.0f, 5.0f, 6.0f};
        r.h_true = {7.0f, 8.0f, 9.0f, 10.0f};
        ds.records = {r};
        const auto bytes = encode_dataset(ds);
        const std::size_t start = bytes.size() - (1 + 12 * 4);
        CHECK(bytes[start] == 2);
        // 1.0f = 0x3f800000, stored low byte first.
        CHECK(bytes[start + 1] == 0x00);
        CHECK(bytes[start + 4] == 0x3f);
        CHECK(bytes[start + 3] == 0x80);
        // -2.0f = 0xc0000000.
        CHECK(bytes[start + 8] == 0xc0);

        ChannelState h(2, 3);
        h(1, 2) = {0.25, -0.75};
        const auto packed = pack_channel(h);
        CHECK(packed[(1 * 3 + 2) * 2] == 0.25f);
        CHECK(packed[(1 * 3 + 2) * 2 + 1] == -0.75f);
        CHECK(unpack_channel(packed, 2, 3) == h);
    }

    TEST_CASE("round trip is the identity on random records")
    {
        TempDir tmp;
        Rng rng(77);
        for (int trial = 0; trial < 25; ++trial)
        {
            CsiDataset ds;
            ds.shape = {1 + rng.below(6), 1 + rng.below(4), 1 + rng.below(5)};
            const std::size_t n = rng.below(6);
            for (std::size_t i = 0; i < n; ++i)
                ds.records.push_back(random_record(ds.shape, rng));
            const fs::path p = tmp.path / "x.csid";
            CHECK(write_dataset(ds, p) == n);
            const CsiDataset back = read_dataset(p);
            REQUIRE(back.records.size() == n);
            CHECK(back.shape == ds.shape);
            for (std::size_t i = 0; i < n; ++i)
            {
                CHECK(back.records[i].label == ds.records[i].label);
                CHECK(bit_equal(back.records[i].y, ds.records[i].y));
                CHECK(bit_equal(back.records[i].h_reported, ds.records[i].h_reported));
                CHECK(bit_equal(back.records[i].h_true, ds.records[i].h_true));
            }
        }
    }

    TEST_CASE("malformed files report the byte offset")
    {
        Rng rng(3);
        CsiDataset ds;
        ds.shape = {2, 2, 2};
        ds.records = {random_record(ds.shape, rng), random_record(ds.shape, rng)};
        const auto good = encode_dataset(ds);
        const std::size_t record_bytes = 1 + 4 * (ds.shape.y_floats() + 2 * ds.shape.h_floats());
        const std::size_t header_end = good.size() - 2 * record_bytes;

        auto bad = good;
        bad[0] = 'X';
        CHECK(format_offset(bad) == 0);
        bad = good;
        bad[4] = 2;
        CHECK(format_offset(bad) == 4);
        CHECK(format_offset({good.begin(), good.begin() + 8}) == 6);
        CHECK(format_offset({good.begin(), good.begin() + 20}) == 10);
        // Cut inside the second record.
        CHECK(format_offset({good.begin(), good.end() - 5}) == header_end + record_bytes);
        bad = good;
        bad.push_back(0);
        CHECK(format_offset(bad) == good.size());
        bad = good;
        bad[header_end] = 9;
        CHECK(format_offset(bad) == header_end);

        CsiDataset nonfinite = ds;
        nonfinite.records[0].y[0] = std::numeric_limits<float>::quiet_NaN();
        CHECK_THROWS_AS(encode_dataset(nonfinite), invalid_argument);
        CsiDataset wrong = ds;
        wrong.records[1].h_true.pop_back();
        CHECK_THROWS_AS(encode_dataset(wrong), invalid_argument);
    }

    TEST_CASE("streaming writer matches the in-memory encoder")
    {
        TempDir tmp;
        DatasetConfig cfg;
        cfg.n_records = 40;
        cfg.n_sub = 4;
        const CsiDataset ds = generate_dataset(cfg);
        CHECK(export_dataset(cfg, tmp.path / "a.csid") == 40);
        write_dataset(ds, tmp.path / "b.csid");
        CHECK(sha256_file(tmp.path / "a.csid") == sha256_file(tmp.path / "b.csid"));

        std::size_t counts[4] = {0, 0, 0, 0};
        for (const auto &r : ds.records)
            ++counts[r.label];
        CHECK(counts[0] == 20);
        CHECK(counts[1] + counts[2] + counts[3] == 20);

        CsidWriter w(tmp.path / "c.csid", ds.shape, 2);
        w.write(ds.records[0]);
        CHECK_THROWS_AS(w.close(), invalid_argument);
    }

    TEST_CASE("genuine records carry the true channel plus LS error only")
    {
        DatasetConfig cfg;
        cfg.n_records = 4;
        cfg.genuine_fraction = 1.0;
        cfg.tx_power_db = 200.0;
        const CsiDataset ds = generate_dataset(cfg);
        for (const auto &r : ds.records)
            for (std::size_t i = 0; i < r.h_true.size(); ++i)
                CHECK(std::abs(r.h_reported[i] - r.h_true[i]) < 1e-5f);
    }

    TEST_CASE("10,000-record seeded export has a stable digest")
    {
        TempDir tmp;
        const DatasetConfig cfg;
        REQUIRE(cfg.n_records == 10000);
        export_dataset(cfg, tmp.path / "desk.csid");
        const std::string digest = sha256_file(tmp.path / "desk.csid");
        const fs::path golden = fs::path(BEAMSEC_GOLDEN_DIR) / "dataset_sha256.txt";
        if (std::getenv("BEAMSEC_UPDATE_GOLDEN"))
            write_text(golden, digest + "\n");
        CHECK(digest + "\n" == read_text(golden));
    }
}

TEST_SUITE("output")
{
    TEST_CASE("metrics text format")
    {
        CHECK(format_metrics({}) == std::string(metrics_header) + "\n");
        MetricsRow r;
        r.slot = 3;
        r.vehicle_id = 1;
        r.snr_db = 12.3456789;
        r.rate = 4.5;
        r.queued = 7;
        r.delivered = 2;
        r.latency = 1.5;
        r.attack_active = true;
        const std::string text = format_metrics({r});
        CHECK(text == std::string(metrics_header) + "\n3,1,12.3457,4.5,7,2,0,1.5,1,0,0\n");
        CHECK(std::count(text.begin(), text.end(), '\n') == 2);
        CHECK(text.find('\r') == std::string::npos);
        const MetricsLog back = parse_metrics(text);
        REQUIRE(back.size() == 1);
        CHECK(back[0].snr_db == doctest::Approx(12.3457));
        CHECK(back[0].attack_active);
        CHECK_THROWS_AS(parse_metrics("slot\n"), invalid_argument);
    }

    TEST_CASE("seeded metrics file matches the golden file")
    {
        ScenarioConfig cfg = default_scenario();
        cfg.n_slots = 400;
        const std::string text = format_metrics(run(cfg));
        const fs::path golden = fs::path(BEAMSEC_GOLDEN_DIR) / "metrics_400.csv";
        if (std::getenv("BEAMSEC_UPDATE_GOLDEN"))
            write_text(golden, text);
        CHECK(text == read_text(golden));
    }

    TEST_CASE("SVG plot")
    {
        const std::string two = render_svg({{"a", {1, 1, 1}}, {"b", {2, 2, 2}}});
        CHECK(two.rfind("<?xml", 0) == 0);
        CHECK(two.find("</svg>") != std::string::npos);
        std::size_t lines = 0;
        for (std::size_t p = two.find("<polyline"); p != std::string::npos; p = two.find("<polyline", p + 1))
        {
            ++lines;
            // Constant series: every point shares one y coordinate.
            const std::size_t a = two.find("points=\"", p) + 8;
            const std::string pts = two.substr(a, two.find('"', a) - a);
            std::istringstream in(pts);
            std::string tok;
            std::set<std::string> ys;
            while (in >> tok)
                ys.insert(tok.substr(tok.find(',') + 1));
            CHECK(ys.size() == 1);
        }
        CHECK(lines == 2);
        CHECK(two.find(">a</text>") != std::string::npos);

        const std::string one = render_svg({{"p", {3.0}}});
        CHECK(one.find("<circle") != std::string::npos);
        CHECK(one.find("<polyline") == std::string::npos);

        CHECK(render_svg({{"x", {1, 5, 2}}}) == render_svg({{"x", {1, 5, 2}}}));
        CHECK_THROWS_AS(render_svg({}), invalid_argument);
        CHECK_THROWS_AS(render_svg({{"e", {}}}), invalid_argument);
        CHECK_THROWS_AS(render_svg({{"a", {1, 2}}, {"b", {1}}}), invalid_argument);
    }

    TEST_CASE("latency series carries the last value forward")
    {
        MetricsLog log(4);
        for (int i = 0; i < 4; ++i)
            log[static_cast<std::size_t>(i)].slot = i;
        log[1].delivered = 2;
        log[1].latency = 3.0;
        CHECK(latency_series(log) == std::vector<double>{0.0, 3.0, 3.0, 3.0});
    }

    TEST_CASE("sha256 of a known input")
    {
        const std::string abc = "abc";
        CHECK(sha256_hex({reinterpret_cast<const std::uint8_t *>(abc.data()), abc.size()}) ==
              "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }
}

TEST_SUITE("config")
{
    TEST_CASE("defaults survive a JSON round trip")
    {
        const Config cfg;
        const auto j = config_to_json(cfg);
        const Config back = config_from_json(nlohmann::json::parse(j.dump()));
        CHECK(config_to_json(back).dump() == j.dump());
        CHECK(back.scenario.vehicles.size() == 3);
        CHECK(back.scenario.vehicles[0].attack.has_value());
    }

    TEST_CASE("partial documents override only the given keys")
    {
        const Config cfg = config_from_json(nlohmann::json::parse(
            R"({"sweep": {"n_channels": 20}, "scenario": {"detection": {"detector": "ks"}, "vehicles": [{"radius": 9.0, "attack": null}]}})"));
        CHECK(cfg.sweep.n_channels == 20);
        CHECK(cfg.sweep.n_ant == 64);
        CHECK(cfg.scenario.detection.detector == DetectorKind::ks);
        REQUIRE(cfg.scenario.vehicles.size() == 1);
        CHECK(cfg.scenario.vehicles[0].radius == 9.0);
        CHECK_FALSE(cfg.scenario.vehicles[0].attack.has_value());
    }

    TEST_CASE("errors carry the JSON path")
    {
        auto field_of = [](const char *text) {
            try
            {
                config_from_json(nlohmann::json::parse(text));
            }
            catch (const config_error &e)
            {
                return e.field();
            }
            return std::string("<none>");
        };
        CHECK(field_of(R"({"sweeps": {}})") == "sweeps");
        CHECK(field_of(R"({"scenario": {"vehicles": [{}, {"radiuss": 3}]}})") == "scenario.vehicles[1].radiuss");
        CHECK(field_of(R"({"scenario": {"vehicles": [{}, {"radius": -3}]}})") == "scenario.vehicles[1].radius");
        CHECK(field_of(R"({"sweep": {"n_ant": "many"}})") == "sweep.n_ant");
        CHECK(field_of(R"({"sweep": {"n_ant": -4}})") == "sweep.n_ant");
        CHECK(field_of(R"({"scenario": {"detection": {"detector": "magic"}}})") == "scenario.detection.detector");
        CHECK(field_of(R"({"scenario": {"n_slots": -1}})") == "scenario.n_slots");
        CHECK(field_of(R"({"dataset": {"genuine_fraction": 2}})") == "dataset.genuine_fraction");
        CHECK(field_of(R"({"ks": {"tests_per_episode": 0}})") == "ks");
        CHECK(field_of(R"([1, 2])") == "");
    }

    TEST_CASE("files: missing, malformed, manifest")
    {
        TempDir tmp;
        try
        {
            load_config(tmp.path / "missing.json");
            FAIL("expected config_error");
        }
        catch (const config_error &e)
        {
            CHECK(std::string(e.what()).find("missing.json") != std::string::npos);
        }
        write_text(tmp.path / "bad.json", "{\"sweep\": ");
        CHECK_THROWS_AS(load_config(tmp.path / "bad.json"), config_error);

        Config cfg;
        cfg.sweep.n_channels = 33;
        nlohmann::ordered_json m;
        m["manifest_version"] = 1;
        m["config"] = config_to_json(cfg);
        write_text(tmp.path / "manifest.json", m.dump());
        CHECK(load_config(tmp.path / "manifest.json").sweep.n_channels == 33);
    }
}

TEST_SUITE("cli")
{
    TEST_CASE("usage and exit codes")
    {
        std::string out, err;
        CHECK(cli({}, &out, &err) == exit_config);
        CHECK(err.find("Usage") != std::string::npos);
        CHECK(cli({"frobnicate"}, &out, &err) == exit_config);
        CHECK(err.find("unknown subcommand") != std::string::npos);
        CHECK(cli({"scenario", "--config", "missing.json"}, &out, &err) == exit_config);
        CHECK(err.find("missing.json") != std::string::npos);
        CHECK(cli({"sweep-snr", "--runs", "0"}, &out, &err) == exit_config);
        CHECK(cli({"--help"}, &out, &err) == exit_ok);
        CHECK(out.find("export-dataset") != std::string::npos);
    }

    TEST_CASE("runtime failures exit with 2")
    {
        TempDir tmp;
        write_text(tmp.path / "file", "x");
        std::string err;
        CHECK(cli({"sweep-snr", "--runs", "10", "--out", (tmp.path / "file").string()}, nullptr, &err) == exit_runtime);
        CHECK_FALSE(err.empty());
    }

    TEST_CASE("sweep-snr prints the degradation table")
    {
        TempDir tmp;
        std::string out;
        REQUIRE(cli({"sweep-snr", "--seed", "1", "--runs", "500", "--out", tmp.path.string()}, &out) == exit_ok);
        for (const char *row : {"10%", "20%", "30%", "40%"})
            CHECK(out.find(row) != std::string::npos);
        CHECK(fs::exists(tmp.path / "sweep.csv"));
        CHECK(fs::exists(tmp.path / "manifest.json"));
    }

    TEST_CASE("a manifest replays its outputs bit for bit")
    {
        TempDir tmp;
        const fs::path a = tmp.path / "a", b = tmp.path / "b";
        REQUIRE(cli({"export-dataset", "--seed", "9", "--runs", "30", "--out", a.string()}) == exit_ok);
        REQUIRE(cli({"export-dataset", "--config", (a / "manifest.json").string(), "--out", b.string()}) == exit_ok);
        CHECK(sha256_file(a / "dataset.csid") == sha256_file(b / "dataset.csid"));
        CHECK(read_dataset(b / "dataset.csid").records.size() == 30);

        Config cfg;
        cfg.scenario.n_slots = 300;
        nlohmann::ordered_json doc = config_to_json(cfg);
        write_text(tmp.path / "short.json", doc.dump());
        const fs::path c = tmp.path / "c", d = tmp.path / "d";
        REQUIRE(cli({"scenario", "--config", (tmp.path / "short.json").string(), "--plot", "--out", c.string()}) == exit_ok);
        REQUIRE(cli({"scenario", "--config", (c / "manifest.json").string(), "--plot", "--out", d.string()}) == exit_ok);
        for (const char *f : {"metrics_detection_on.csv", "metrics_detection_off.csv", "latency.svg"})
            CHECK(sha256_file(c / f) == sha256_file(d / f));
    }
}
