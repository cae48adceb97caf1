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

#include "beamsec/dataset.hpp"

#include "beamsec/attacks.hpp"
#include "beamsec/beamforming.hpp"
#include "beamsec/errors.hpp"

#include "json.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <numbers>

namespace beamsec
{

namespace
{

constexpr char magic[4] = {'C', 'S', 'I', 'D'};

class ByteWriter
{
public:
    explicit ByteWriter(std::vector<std::uint8_t> &out) : out_(out) {}

    void u8(std::uint8_t v) { out_.push_back(v); }
    void u16(std::uint16_t v) { put(v, 2); }
    void u32(std::uint32_t v) { put(v, 4); }
    void f32s(std::span<const float> v)
    {
        for (float f : v)
            put(std::bit_cast<std::uint32_t>(f), 4);
    }
    void bytes(const void *p, std::size_t n)
    {
        const auto *b = static_cast<const std::uint8_t *>(p);
        out_.insert(out_.end(), b, b + n);
    }

private:
    void put(std::uint64_t v, int n)
    {
        for (int i = 0; i < n; ++i)
            out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }

    std::vector<std::uint8_t> &out_;
};

class ByteReader
{
public:
    explicit ByteReader(std::span<const std::uint8_t> in) : in_(in) {}

    std::size_t offset() const noexcept { return pos_; }
    std::size_t remaining() const noexcept { return in_.size() - pos_; }

    void need(std::size_t n, const char *what) const
    {
        if (remaining() < n)
            throw format_error(pos_, std::string("truncated ") + what);
    }
    std::uint8_t u8(const char *what)
    {
        need(1, what);
        return in_[pos_++];
    }
    std::uint16_t u16(const char *what) { return static_cast<std::uint16_t>(get(2, what)); }
    std::uint32_t u32(const char *what) { return static_cast<std::uint32_t>(get(4, what)); }
    void f32s(std::vector<float> &out, std::size_t n, const char *what)
    {
        need(4 * n, what);
        out.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            out[i] = std::bit_cast<float>(static_cast<std::uint32_t>(get(4, what)));
    }
    std::span<const std::uint8_t> take(std::size_t n, const char *what)
    {
        need(n, what);
        auto s = in_.subspan(pos_, n);
        pos_ += n;
        return s;
    }

private:
    std::uint64_t get(int n, const char *what)
    {
        need(static_cast<std::size_t>(n), what);
        std::uint64_t v = 0;
        for (int i = 0; i < n; ++i)
            v |= static_cast<std::uint64_t>(in_[pos_++]) << (8 * i);
        return v;
    }

    std::span<const std::uint8_t> in_;
    std::size_t pos_ = 0;
};

void check_record(const CsiDatasetRecord &r, const DatasetShape &s, std::size_t index)
{
    const std::string where = "record " + std::to_string(index);
    if (r.y.size() != s.y_floats() || r.h_reported.size() != s.h_floats() || r.h_true.size() != s.h_floats())
        throw invalid_argument("write_dataset: " + where + " does not match the dataset shape");
    if (r.label > 3)
        throw invalid_argument("write_dataset: " + where + " has label > 3");
    auto finite = [](const std::vector<float> &v) {
        return std::all_of(v.begin(), v.end(), [](float f) { return std::isfinite(f); });
    };
    if (!finite(r.y) || !finite(r.h_reported) || !finite(r.h_true))
        throw invalid_argument("write_dataset: " + where + " has non-finite values");
}

std::size_t header_size(const nlohmann::json &h, const char *key, std::size_t at)
{
    const auto it = h.find(key);
    if (it == h.end() || !it->is_number_unsigned())
        throw format_error(at, std::string("header field '") + key + "' missing or not an unsigned integer");
    return it->get<std::size_t>();
}

void encode_header(std::vector<std::uint8_t> &out, const DatasetShape &s, std::size_t n_records)
{
    nlohmann::ordered_json header;
    header["n_ant"] = s.n_ant;
    header["n_sub"] = s.n_sub;
    header["n_pilot"] = s.n_pilot;
    header["n_records"] = n_records;
    header["dtype"] = "f32";
    const std::string text = header.dump();
    ByteWriter w(out);
    w.bytes(magic, 4);
    w.u16(csid_version);
    w.u32(static_cast<std::uint32_t>(text.size()));
    w.bytes(text.data(), text.size());
}

void encode_record(std::vector<std::uint8_t> &out, const CsiDatasetRecord &r)
{
    ByteWriter w(out);
    w.u8(r.label);
    w.f32s(r.y);
    w.f32s(r.h_reported);
    w.f32s(r.h_true);
}

} // namespace

std::vector<std::uint8_t> encode_dataset(const CsiDataset &ds)
{
    const DatasetShape &s = ds.shape;
    for (std::size_t i = 0; i < ds.records.size(); ++i)
        check_record(ds.records[i], s, i);
    std::vector<std::uint8_t> out;
    out.reserve(128 + ds.records.size() * (1 + 4 * (s.y_floats() + 2 * s.h_floats())));
    encode_header(out, s, ds.records.size());
    for (const auto &r : ds.records)
        encode_record(out, r);
    return out;
}

CsiDataset decode_dataset(std::span<const std::uint8_t> bytes)
{
    ByteReader r(bytes);
    const auto m = r.take(4, "magic");
    if (std::memcmp(m.data(), magic, 4) != 0)
        throw format_error(0, "bad magic, expected CSID");
    const std::size_t version_at = r.offset();
    if (const auto v = r.u16("version"); v != csid_version)
        throw format_error(version_at, "unsupported version " + std::to_string(v));
    const std::uint32_t len = r.u32("header length");
    const std::size_t header_at = r.offset();
    const auto text = r.take(len, "header");

    nlohmann::json header;
    try
    {
        header = nlohmann::json::parse(text.begin(), text.end());
    }
    catch (const nlohmann::json::parse_error &e)
    {
        throw format_error(header_at + (e.byte > 0 ? e.byte - 1 : 0), "header is not valid JSON");
    }
    if (!header.is_object())
        throw format_error(header_at, "header is not a JSON object");
    if (header.value("dtype", std::string{}) != "f32")
        throw format_error(header_at, "header dtype must be \"f32\"");

    CsiDataset ds;
    ds.shape.n_ant = header_size(header, "n_ant", header_at);
    ds.shape.n_sub = header_size(header, "n_sub", header_at);
    ds.shape.n_pilot = header_size(header, "n_pilot", header_at);
    const std::size_t n = header_size(header, "n_records", header_at);
    const std::size_t record_bytes = 1 + 4 * (ds.shape.y_floats() + 2 * ds.shape.h_floats());
    if (n > 0 && r.remaining() / record_bytes < n)
        throw format_error(r.offset() + (r.remaining() / record_bytes) * record_bytes,
                           "truncated record " + std::to_string(r.remaining() / record_bytes));

    ds.records.resize(n);
    for (auto &rec : ds.records)
    {
        const std::size_t at = r.offset();
        rec.label = r.u8("label");
        if (rec.label > 3)
            throw format_error(at, "label " + std::to_string(rec.label) + " out of range");
        r.f32s(rec.y, ds.shape.y_floats(), "y");
        r.f32s(rec.h_reported, ds.shape.h_floats(), "h_reported");
        r.f32s(rec.h_true, ds.shape.h_floats(), "h_true");
    }
    if (r.remaining() != 0)
        throw format_error(r.offset(), "trailing bytes after the last record");
    return ds;
}

std::size_t write_dataset(const CsiDataset &ds, const std::filesystem::path &path)
{
    const auto bytes = encode_dataset(ds);
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f)
        throw io_error("cannot open " + path.string() + " for writing");
    f.write(reinterpret_cast<const char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!f)
        throw io_error("write failed: " + path.string());
    return ds.records.size();
}

CsiDataset read_dataset(const std::filesystem::path &path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw io_error("cannot open " + path.string());
    const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    return decode_dataset(bytes);
}

CsidWriter::CsidWriter(const std::filesystem::path &path, DatasetShape shape, std::size_t n_records)
    : path_(path), shape_(shape), expected_(n_records), file_(path, std::ios::binary | std::ios::trunc)
{
    if (!file_)
        throw io_error("cannot open " + path.string() + " for writing");
    encode_header(buffer_, shape_, n_records);
    file_.write(reinterpret_cast<const char *>(buffer_.data()), static_cast<std::streamsize>(buffer_.size()));
}

void CsidWriter::write(const CsiDatasetRecord &record)
{
    if (written_ == expected_)
        throw invalid_argument("CsidWriter: more records than declared in the header");
    check_record(record, shape_, written_);
    buffer_.clear();
    encode_record(buffer_, record);
    file_.write(reinterpret_cast<const char *>(buffer_.data()), static_cast<std::streamsize>(buffer_.size()));
    if (!file_)
        throw io_error("write failed: " + path_.string());
    ++written_;
}

void CsidWriter::close()
{
    if (written_ != expected_)
        throw invalid_argument("CsidWriter: " + std::to_string(written_) + " records written, header declares " +
                               std::to_string(expected_));
    file_.close();
    if (!file_)
        throw io_error("close failed: " + path_.string());
}

std::vector<float> pack_signal(const ReceivedSignal &sig)
{
    const std::size_t p = sig.n_pilot();
    std::vector<float> out(sig.n_ant * p * 2);
    for (std::size_t a = 0; a < sig.n_ant; ++a)
        for (std::size_t t = 0; t < p; ++t)
        {
            out[(a * p + t) * 2] = static_cast<float>(sig.at(a, t).real());
            out[(a * p + t) * 2 + 1] = static_cast<float>(sig.at(a, t).imag());
        }
    return out;
}

std::vector<float> pack_channel(const ChannelState &h)
{
    const std::size_t ns = h.n_sub();
    std::vector<float> out(h.n_ant() * ns * 2);
    for (std::size_t a = 0; a < h.n_ant(); ++a)
        for (std::size_t m = 0; m < ns; ++m)
        {
            out[(a * ns + m) * 2] = static_cast<float>(h(a, m).real());
            out[(a * ns + m) * 2 + 1] = static_cast<float>(h(a, m).imag());
        }
    return out;
}

ChannelState unpack_channel(std::span<const float> data, std::size_t n_ant, std::size_t n_sub)
{
    if (data.size() != n_ant * n_sub * 2)
        throw invalid_argument("unpack_channel: size mismatch");
    ChannelState h(n_ant, n_sub);
    for (std::size_t a = 0; a < n_ant; ++a)
        for (std::size_t m = 0; m < n_sub; ++m)
            h(a, m) = {data[(a * n_sub + m) * 2], data[(a * n_sub + m) * 2 + 1]};
    return h;
}

void DatasetConfig::validate() const
{
    if (n_ant == 0 || n_sub == 0 || n_pilot == 0)
        throw config_error("n_ant", "n_ant, n_sub and n_pilot must be >= 1");
    if (n_paths == 0)
        throw config_error("n_paths", "must be >= 1");
    if (!(genuine_fraction >= 0.0 && genuine_fraction <= 1.0))
        throw config_error("genuine_fraction", "must lie in [0, 1]");
    if (!(spoof_delta >= 0.0))
        throw config_error("spoof_delta", "must be >= 0");
    if (!(contamination_power >= 0.0))
        throw config_error("contamination_power", "must be >= 0");
    if (!(max_delay_s >= 0.0) || !(subcarrier_spacing_hz > 0.0))
        throw config_error("max_delay_s", "delays and spacing must be non-negative");
}

namespace
{

ChannelState random_multipath(const DatasetConfig &cfg, Rng &rng)
{
    constexpr double pi = std::numbers::pi;
    PathSet ps;
    for (std::size_t l = 0; l < cfg.n_paths; ++l)
    {
        Path p;
        p.aod = rng.uniform(-pi / 2.0, pi / 2.0);
        p.aoa = p.aod;
        p.gain = rng.complex_normal(1.0 / static_cast<double>(cfg.n_paths));
        p.path_loss_db = -20.0 * std::log10(std::abs(p.gain));
        p.delay = rng.uniform(0.0, cfg.max_delay_s);
        ps.paths.push_back(p);
    }
    return generate_channel(ps, cfg.n_ant, {cfg.n_sub, cfg.subcarrier_spacing_hz});
}

} // namespace

void generate_dataset(const DatasetConfig &cfg, const std::function<void(CsiDatasetRecord &&)> &sink)
{
    cfg.validate();
    Rng rng(cfg.seed);
    const CVector pilot = make_pilot(cfg.n_pilot);
    const double noise_var = from_db(-cfg.tx_power_db);
    const auto n_genuine = static_cast<std::size_t>(std::llround(cfg.genuine_fraction * static_cast<double>(cfg.n_records)));

    for (std::size_t i = 0; i < cfg.n_records; ++i)
    {
        const RecordLabel label =
            i < n_genuine ? RecordLabel::genuine : static_cast<RecordLabel>(1 + (i - n_genuine) % 3);
        ChannelState h = random_multipath(cfg, rng);
        h.set_block_id(static_cast<std::int64_t>(i));

        CsiReport rep;
        ReceivedSignal burst0;
        if (label == RecordLabel::contaminated)
        {
            // Attacker on its own random channel reusing the public pilot on every burst.
            const ChannelState g = random_multipath(cfg, rng);
            rep.h_hat = ChannelState(cfg.n_ant, cfg.n_sub, h.block_id());
            ChannelState col(cfg.n_ant, 1);
            ChannelState gcol(cfg.n_ant, 1);
            for (std::size_t m = 0; m < cfg.n_sub; ++m)
            {
                std::copy(h.column(m).begin(), h.column(m).end(), col.column(0).begin());
                std::copy(g.column(m).begin(), g.column(m).end(), gcol.column(0).begin());
                ReceivedSignal sig =
                    contaminate_pilot(transmit_pilot(col, pilot, noise_var, rng), gcol, cfg.contamination_power, pilot);
                const CsiReport one = estimate_csi(sig);
                std::copy(one.h_hat.column(0).begin(), one.h_hat.column(0).end(), rep.h_hat.column(m).begin());
                if (m == 0)
                    burst0 = std::move(sig);
            }
            rep.refresh_phase();
            rep.tampered = true;
        }
        else
        {
            rep = estimate_wideband(h, pilot, noise_var, rng, &burst0);
            if (label == RecordLabel::phase_spoofed)
                rep = spoof_csi_phase(rep, cfg.spoof_delta, rng);
            else if (label == RecordLabel::forged)
                rep = forge_report(rep, PositionSpoofAngle{rng.uniform(-std::numbers::pi / 2.0, std::numbers::pi / 2.0)},
                                   rng);
        }

        CsiDatasetRecord r;
        r.label = static_cast<std::uint8_t>(label);
        r.y = pack_signal(burst0);
        r.h_reported = pack_channel(rep.h_hat);
        r.h_true = pack_channel(h);
        sink(std::move(r));
    }
}

CsiDataset generate_dataset(const DatasetConfig &cfg)
{
    CsiDataset ds;
    ds.shape = {cfg.n_ant, cfg.n_sub, cfg.n_pilot};
    ds.records.reserve(cfg.n_records);
    generate_dataset(cfg, [&](CsiDatasetRecord &&r) { ds.records.push_back(std::move(r)); });
    return ds;
}

std::size_t export_dataset(const DatasetConfig &cfg, const std::filesystem::path &path)
{
    CsidWriter w(path, {cfg.n_ant, cfg.n_sub, cfg.n_pilot}, cfg.n_records);
    generate_dataset(cfg, [&](CsiDatasetRecord &&r) { w.write(r); });
    w.close();
    return w.written();
}

} // namespace beamsec
