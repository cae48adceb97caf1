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

#ifndef BEAMSEC_OUTPUT_HPP
#define BEAMSEC_OUTPUT_HPP

#include "beamsec/scenario.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace beamsec
{

// ---------------------------------------------------------------- metrics

inline constexpr const char *metrics_header =
    "slot,vehicle_id,snr_db,rate,queued,delivered,dropped,latency,attack_active,alarm,identifying";

/// Comma-separated rows in the fixed column order of `metrics_header`,
/// floats with 6 significant digits, LF line endings.
std::string format_metrics(const MetricsLog &log);
void write_metrics(const MetricsLog &log, const std::filesystem::path &path);

// Inverse of format_metrics up to the 6-digit rounding of float columns.
MetricsLog parse_metrics(const std::string &text);

// ---------------------------------------------------------------- plot

struct Series
{
    std::string name;
    std::vector<double> values;
};

struct PlotOptions
{
    std::string title;
    std::string x_label = "slot";
    std::string y_label;
    int width = 800;
    int height = 480;
};

/// Standalone SVG line chart with axes and legend. Byte-deterministic.
std::string render_svg(const std::vector<Series> &series, const PlotOptions &opt = {});
void emit_plot(const std::vector<Series> &series, const std::filesystem::path &path, const PlotOptions &opt = {});

// Per-slot latency across vehicles (delivery-weighted), carried forward over
// slots without deliveries.
std::vector<double> latency_series(const MetricsLog &log);

// ---------------------------------------------------------------- files

void write_text(const std::filesystem::path &path, const std::string &text);
std::string read_text(const std::filesystem::path &path);

// Lower-case hex SHA-256.
std::string sha256_hex(std::span<const std::uint8_t> bytes);
std::string sha256_file(const std::filesystem::path &path);

} // namespace beamsec

#endif
