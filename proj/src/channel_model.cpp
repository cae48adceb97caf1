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

#include "beamsec/channel_model.hpp"

#include "beamsec/errors.hpp"

#include <cmath>
#include <numbers>

namespace beamsec
{

namespace
{
constexpr double half_pi = std::numbers::pi / 2.0;
constexpr double angle_slack = 1e-12;
} // namespace

void PathSet::validate(double reference_amplitude) const
{
    for (std::size_t i = 0; i < paths.size(); ++i)
    {
        const Path &p = paths[i];
        const std::string where = "path " + std::to_string(i) + ": ";
        if (!(std::abs(p.aod) <= half_pi + angle_slack) || !(std::abs(p.aoa) <= half_pi + angle_slack))
            throw invalid_argument(where + "angle outside [-pi/2, pi/2]");
        if (!(p.path_loss_db >= 0.0))
            throw invalid_argument(where + "negative path loss");
        const double expected = std::pow(10.0, -p.path_loss_db / 20.0) * reference_amplitude;
        if (std::abs(std::abs(p.gain) - expected) > 1e-9 * expected)
            throw invalid_argument(where + "gain magnitude inconsistent with path loss");
        if (!std::isfinite(p.delay) || p.delay < 0.0 || !std::isfinite(p.phase))
            throw invalid_argument(where + "delay/phase must be finite, delay >= 0");
    }
}

Path make_path(double aod, double path_loss_db, double phase, double delay, double reference_amplitude)
{
    Path p;
    p.aod = aod;
    p.aoa = aod;
    p.path_loss_db = path_loss_db;
    p.gain = std::pow(10.0, -path_loss_db / 20.0) * reference_amplitude;
    p.phase = phase;
    p.delay = delay;
    return p;
}

ChannelState::ChannelState(std::size_t n_ant, std::size_t n_sub, std::int64_t block_id)
    : n_ant_(n_ant), n_sub_(n_sub), block_id_(block_id), h_(n_ant * n_sub)
{
    if (n_ant == 0 || n_sub == 0)
        throw invalid_argument("ChannelState: n_ant and n_sub must be >= 1");
}

bool ChannelState::is_finite() const noexcept
{
    for (const cd &v : h_)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            return false;
    return true;
}

double ChannelState::frobenius_norm2() const noexcept
{
    double s = 0.0;
    for (const cd &v : h_)
        s += std::norm(v);
    return s;
}

ChannelState &ChannelState::operator+=(const ChannelState &other)
{
    if (other.n_ant_ != n_ant_ || other.n_sub_ != n_sub_)
        throw invalid_argument("ChannelState: dimension mismatch in addition");
    for (std::size_t i = 0; i < h_.size(); ++i)
        h_[i] += other.h_[i];
    return *this;
}

ChannelState &ChannelState::operator*=(cd s)
{
    for (cd &v : h_)
        v *= s;
    return *this;
}

ChannelState operator+(ChannelState a, const ChannelState &b)
{
    a += b;
    return a;
}

void FadingProcess::validate() const
{
    if (!(rho >= 0.0 && rho <= 1.0))
        throw invalid_argument("FadingProcess: rho must lie in [0, 1]");
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2))
        throw invalid_argument("FadingProcess: sigma2 must be > 0");
}

CVector steering_vector(double theta, std::size_t n_ant)
{
    if (n_ant == 0)
        throw invalid_argument("steering_vector: n_ant must be >= 1");
    if (!std::isfinite(theta))
        throw invalid_argument("steering_vector: theta must be finite");
    CVector a(n_ant);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n_ant));
    const double step = std::numbers::pi * std::sin(theta);
    for (std::size_t k = 0; k < n_ant; ++k)
        a[k] = std::polar(scale, step * static_cast<double>(k));
    return a;
}

ChannelState generate_channel(const PathSet &paths, std::size_t n_ant, SubcarrierGrid grid)
{
    ChannelState h(n_ant, grid.n_sub);
    const double array_scale = std::sqrt(static_cast<double>(n_ant));
    for (const Path &p : paths.paths)
    {
        const CVector a = steering_vector(p.aod, n_ant);
        const cd base = p.gain * std::polar(1.0, p.phase) * array_scale;
        for (std::size_t m = 0; m < grid.n_sub; ++m)
        {
            const double f_m = static_cast<double>(m) * grid.spacing_hz;
            const cd coeff = base * std::polar(1.0, -2.0 * std::numbers::pi * f_m * p.delay);
            auto col = h.column(m);
            for (std::size_t k = 0; k < n_ant; ++k)
                col[k] += coeff * a[k];
        }
    }
    return h;
}

ChannelState fading_step(const ChannelState &h, const FadingProcess &proc, Rng &rng)
{
    proc.validate();
    ChannelState out = h;
    const double innov = std::sqrt(std::max(0.0, 1.0 - proc.rho * proc.rho));
    if (innov == 0.0)
    {
        out.set_block_id(h.block_id() + 1);
        return out;
    }
    for (cd &v : out.data())
        v = proc.rho * v + innov * rng.complex_normal(proc.sigma2);
    out.set_block_id(h.block_id() + 1);
    return out;
}

ChannelState sample_rayleigh_block(std::size_t n_ant, std::size_t n_sub, double sigma2, Rng &rng)
{
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2))
        throw invalid_argument("sample_rayleigh_block: sigma2 must be > 0");
    ChannelState h(n_ant, n_sub);
    for (cd &v : h.data())
        v = rng.complex_normal(sigma2);
    return h;
}

double free_space_path_loss_db(double distance_m, double carrier_freq_hz)
{
    if (!(distance_m > 0.0) || !(carrier_freq_hz > 0.0))
        throw invalid_argument("free_space_path_loss_db: distance and frequency must be > 0");
    return 20.0 * std::log10(4.0 * std::numbers::pi * distance_m * carrier_freq_hz / speed_of_light);
}

double wrap_angle(double a) noexcept
{
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double r = std::fmod(a, two_pi);
    if (r <= -std::numbers::pi)
        r += two_pi;
    else if (r > std::numbers::pi)
        r -= two_pi;
    return r;
}

} // namespace beamsec
