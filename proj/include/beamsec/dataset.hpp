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

#ifndef BEAMSEC_DATASET_HPP
#define BEAMSEC_DATASET_HPP

#include "beamsec/csi.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <span>
#include <vector>

namespace beamsec
{

enum class RecordLabel : std::uint8_t
{
    genuine = 0,
    phase_spoofed = 1,
    contaminated = 2,
    forged = 3,
};

struct DatasetShape
{
    std::size_t n_ant = 0;
    std::size_t n_sub = 0;
    std::size_t n_pilot = 0;

    std::size_t y_floats() const noexcept { return n_ant * n_pilot * 2; }
    std::size_t h_floats() const noexcept { return n_ant * n_sub * 2; }
    bool operator==(const DatasetShape &) const = default;
};

/// One training example. Tensors are row-major (antenna, subcarrier or
/// pilot, re/im).
struct CsiDatasetRecord
{
    std::uint8_t label = 0;
    std::vector<float> y;
    std::vector<float> h_reported;
    std::vector<float> h_true;

    bool operator==(const CsiDatasetRecord &) const = default;
};

struct CsiDataset
{
    DatasetShape shape;
    std::vector<CsiDatasetRecord> records;
};

/// CSID container, little-endian throughout:
///   "CSID" | u16 version = 1 | u32 header length | UTF-8 JSON header
///   {"n_ant", "n_sub", "n_pilot", "n_records", "dtype": "f32"}
///   then per record: u8 label, y, h_reported, h_true as raw f32.
inline constexpr std::uint16_t csid_version = 1;

std::vector<std::uint8_t> encode_dataset(const CsiDataset &ds);
CsiDataset decode_dataset(std::span<const std::uint8_t> bytes);

// Returns the number of records written.
std::size_t write_dataset(const CsiDataset &ds, const std::filesystem::path &path);
CsiDataset read_dataset(const std::filesystem::path &path);

/// Streaming writer for exports too large to hold in memory. The record
/// count is fixed up front because the header precedes the records.
class CsidWriter
{
public:
    CsidWriter(const std::filesystem::path &path, DatasetShape shape, std::size_t n_records);

    void write(const CsiDatasetRecord &record);
    // Throws unless exactly n_records were written.
    void close();
    std::size_t written() const noexcept { return written_; }

private:
    std::filesystem::path path_;
    DatasetShape shape_;
    std::size_t expected_;
    std::size_t written_ = 0;
    std::ofstream file_;
    std::vector<std::uint8_t> buffer_;
};

// Tensor conversions.
std::vector<float> pack_signal(const ReceivedSignal &sig);
std::vector<float> pack_channel(const ChannelState &h);
ChannelState unpack_channel(std::span<const float> data, std::size_t n_ant, std::size_t n_sub);

struct DatasetConfig
{
    std::size_t n_records = 10000;
    std::size_t n_ant = 64;
    std::size_t n_sub = 16;
    std::size_t n_pilot = 8;
    std::size_t n_paths = 3;
    double subcarrier_spacing_hz = 120e3;
    double max_delay_s = 100e-9;
    double tx_power_db = 10.0;          // per-entry pilot SNR
    double genuine_fraction = 0.5;      // the rest cycles spoofed, contaminated, forged
    double spoof_delta = 1.5707963267948966; // pi/2
    double contamination_power = 1.0;
    std::uint64_t seed = 7;

    void validate() const;
};

/// Seeded synthetic export: geometric multipath channels (per-entry power
/// about 1), one pilot burst per subcarrier, y holds subcarrier 0's burst.
void generate_dataset(const DatasetConfig &cfg, const std::function<void(CsiDatasetRecord &&)> &sink);
CsiDataset generate_dataset(const DatasetConfig &cfg);

// Generates straight to disk; returns the number of records.
std::size_t export_dataset(const DatasetConfig &cfg, const std::filesystem::path &path);

} // namespace beamsec

#endif
