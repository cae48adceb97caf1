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

#ifndef BEAMSEC_CHANNEL_MODEL_HPP
#define BEAMSEC_CHANNEL_MODEL_HPP

#include "beamsec/rng.hpp"

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace beamsec
{

using cd = std::complex<double>;
using CVector = std::vector<cd>;

constexpr double speed_of_light = 299792458.0;

/// One geometric propagation path, the fields a ray tracer would report.
struct Path
{
    double aod = 0.0;          // departure angle at the array [rad], within [-pi/2, pi/2]
    double aoa = 0.0;          // arrival angle at the device [rad]
    cd gain{1.0, 0.0};         // linear complex amplitude
    double delay = 0.0;        // [s]
    double phase = 0.0;        // additional path phase [rad]
    double path_loss_db = 0.0; // |gain| == 10^(-path_loss_db/20) * reference amplitude
};

struct PathSet
{
    std::vector<Path> paths;
    double carrier_freq_hz = 24.0e9;

    // Throws invalid_argument when an angle leaves [-pi/2, pi/2], a loss is
    // negative, or a gain disagrees with its loss beyond 1e-9 relative.
    void validate(double reference_amplitude = 1.0) const;
};

// Path with |gain| derived from loss, so the PathSet invariant holds by construction.
Path make_path(double aod, double path_loss_db, double phase = 0.0, double delay = 0.0,
               double reference_amplitude = 1.0);

/// Complex channel matrix H [n_ant x n_sub], stored column-major so that each
/// subcarrier column is contiguous.
class ChannelState
{
public:
    ChannelState() = default;
    ChannelState(std::size_t n_ant, std::size_t n_sub, std::int64_t block_id = 0);

    std::size_t n_ant() const noexcept { return n_ant_; }
    std::size_t n_sub() const noexcept { return n_sub_; }
    std::int64_t block_id() const noexcept { return block_id_; }
    void set_block_id(std::int64_t id) noexcept { block_id_ = id; }

    cd &operator()(std::size_t ant, std::size_t sub) { return h_[sub * n_ant_ + ant]; }
    const cd &operator()(std::size_t ant, std::size_t sub) const { return h_[sub * n_ant_ + ant]; }

    std::span<cd> column(std::size_t sub) { return {h_.data() + sub * n_ant_, n_ant_}; }
    std::span<const cd> column(std::size_t sub) const { return {h_.data() + sub * n_ant_, n_ant_}; }

    std::span<cd> data() noexcept { return h_; }
    std::span<const cd> data() const noexcept { return h_; }

    bool is_finite() const noexcept;
    double frobenius_norm2() const noexcept;

    ChannelState &operator+=(const ChannelState &other);
    ChannelState &operator*=(cd s);

    friend bool operator==(const ChannelState &, const ChannelState &) = default;

private:
    std::size_t n_ant_ = 0;
    std::size_t n_sub_ = 0;
    std::int64_t block_id_ = 0;
    CVector h_;
};

ChannelState operator+(ChannelState a, const ChannelState &b);

/// AR(1) Rayleigh dynamics applied independently to every matrix entry.
struct FadingProcess
{
    double rho = 0.9;    // one-step correlation, [0, 1]
    double sigma2 = 1.0; // stationary per-entry variance, > 0
    std::uint64_t rng_seed = 0;

    void validate() const;
};

/// Half-wavelength ULA response, entry k = exp(i*pi*k*sin(theta)) / sqrt(n_ant).
CVector steering_vector(double theta, std::size_t n_ant);

struct SubcarrierGrid
{
    std::size_t n_sub = 1;
    double spacing_hz = 120.0e3;
};

/// Sum of path contributions. Column m (offset f_m = m * spacing) is
///   sum_l gain_l * e^{i phase_l} * e^{-i 2 pi f_m delay_l} * sqrt(n_ant) * a(aod_l).
/// The sqrt(n_ant) factor gives a unit-gain path beamforming gain n_ant under
/// the matched codeword. Deterministic in its inputs.
ChannelState generate_channel(const PathSet &paths, std::size_t n_ant, SubcarrierGrid grid = {});

/// h' = rho*h + sqrt(1 - rho^2)*w, w ~ CN(0, sigma2) per entry; block_id + 1.
ChannelState fading_step(const ChannelState &h, const FadingProcess &proc, Rng &rng);

/// I.i.d. CN(0, sigma2) block (quasi-static flat fading).
ChannelState sample_rayleigh_block(std::size_t n_ant, std::size_t n_sub, double sigma2, Rng &rng);

/// Free-space loss 20 log10(4 pi d f / c) [dB].
double free_space_path_loss_db(double distance_m, double carrier_freq_hz);

// Wraps to (-pi, pi].
double wrap_angle(double a) noexcept;

} // namespace beamsec

#endif
