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

#include "beamsec/beamforming.hpp"

#include "beamsec/errors.hpp"

#include <cmath>
#include <numbers>

namespace beamsec
{

Codeword Codeword::array(CVector weights)
{
    if (weights.empty())
        throw invalid_argument("Codeword: empty weight vector");
    double n2 = 0.0;
    for (const cd &w : weights)
        n2 += std::norm(w);
    if (std::abs(std::sqrt(n2) - 1.0) > 1e-12)
        throw invalid_argument("Codeword: array weights must have unit norm");
    Codeword c;
    c.kind_ = CodewordKind::array;
    c.weights_ = std::move(weights);
    return c;
}

Codeword Codeword::ris(std::vector<double> phases)
{
    if (phases.empty())
        throw invalid_argument("Codeword: empty phase profile");
    Codeword c;
    c.kind_ = CodewordKind::ris;
    const double scale = 1.0 / std::sqrt(static_cast<double>(phases.size()));
    c.weights_.reserve(phases.size());
    for (double phi : phases)
    {
        if (!std::isfinite(phi))
            throw invalid_argument("Codeword: non-finite RIS phase");
        c.weights_.push_back(std::polar(scale, phi));
    }
    c.phases_ = std::move(phases);
    return c;
}

CVector Codeword::ris_entries() const
{
    CVector out;
    out.reserve(phases_.size());
    for (double phi : phases_)
        out.push_back(std::polar(1.0, phi));
    return out;
}

void Codebook::validate() const
{
    if (codewords.empty())
        throw invalid_argument("Codebook: no codewords");
    if (beam_angles.size() != codewords.size())
        throw invalid_argument("Codebook: one beam angle per codeword required");
    for (const Codeword &c : codewords)
        if (c.kind() != codewords.front().kind() || c.size() != codewords.front().size())
            throw invalid_argument("Codebook: codewords differ in kind or dimension");
}

double LinkBudget::tx_power_linear() const
{
    return from_db(tx_power_db);
}

namespace
{

std::vector<double> dft_angles(std::size_t n_beams)
{
    std::vector<double> angles(n_beams);
    for (std::size_t b = 0; b < n_beams; ++b)
        angles[b] = std::asin(-1.0 + 2.0 * static_cast<double>(b) / static_cast<double>(n_beams));
    return angles;
}

} // namespace

Codebook dft_codebook(std::size_t n_ant, std::size_t n_beams)
{
    if (n_ant == 0 || n_beams == 0)
        throw invalid_argument("dft_codebook: sizes must be >= 1");
    Codebook cb;
    cb.beam_angles = dft_angles(n_beams);
    cb.codewords.reserve(n_beams);
    for (double theta : cb.beam_angles)
        cb.codewords.push_back(Codeword::array(steering_vector(theta, n_ant)));
    return cb;
}

Codebook ris_codebook(std::size_t n_elem, std::size_t n_beams)
{
    if (n_elem == 0 || n_beams == 0)
        throw invalid_argument("ris_codebook: sizes must be >= 1");
    Codebook cb;
    cb.beam_angles = dft_angles(n_beams);
    for (double theta : cb.beam_angles)
    {
        std::vector<double> phases(n_elem);
        for (std::size_t k = 0; k < n_elem; ++k)
            phases[k] = wrap_angle(std::numbers::pi * static_cast<double>(k) * std::sin(theta));
        cb.codewords.push_back(Codeword::ris(std::move(phases)));
    }
    return cb;
}

double beam_gain(const Codeword &cw, const ChannelState &h)
{
    if (cw.size() != h.n_ant())
        throw invalid_argument("beam_gain: codeword and channel dimensions differ");
    const auto col = h.column(0);
    const auto &w = cw.weights();
    cd acc{0.0, 0.0};
    for (std::size_t k = 0; k < w.size(); ++k)
        acc += std::conj(w[k]) * col[k];
    return std::norm(acc);
}

BeamChoice select_beam(const Codebook &cb, const ChannelState &h_reported)
{
    if (cb.codewords.empty())
        throw invalid_argument("select_beam: empty codebook");
    if (cb.dimension() != h_reported.n_ant())
        throw invalid_argument("select_beam: codebook and channel dimensions differ");
    BeamChoice best;
    best.gain = -1.0;
    for (std::size_t b = 0; b < cb.codewords.size(); ++b)
    {
        const double g = beam_gain(cb.codewords[b], h_reported);
        if (g > best.gain)
        {
            best.gain = g;
            best.index = b;
        }
    }
    return best;
}

double realized_snr(const ChannelState &h_true, const Codeword &cw, const LinkBudget &lb)
{
    if (!(lb.noise_power > 0.0))
        throw invalid_argument("realized_snr: noise power must be > 0");
    return lb.tx_power_linear() * beam_gain(cw, h_true) / lb.noise_power;
}

double achievable_rate(double snr)
{
    if (!(snr >= 0.0))
        throw invalid_argument("achievable_rate: snr must be >= 0");
    return std::log2(1.0 + snr);
}

double to_db(double linear)
{
    return 10.0 * std::log10(linear);
}

double from_db(double db)
{
    return std::pow(10.0, db / 10.0);
}

} // namespace beamsec
