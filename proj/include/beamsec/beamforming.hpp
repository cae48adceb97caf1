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

#ifndef BEAMSEC_BEAMFORMING_HPP
#define BEAMSEC_BEAMFORMING_HPP

#include "beamsec/channel_model.hpp"

#include <cstddef>
#include <vector>

namespace beamsec
{

enum class CodewordKind
{
    array, // phased-array weights, unit Euclidean norm
    ris    // phase-only profile, unit-modulus entries
};

/// Beamforming codeword. For `array` the weights are stored directly; for
/// `ris` the phase profile is stored and `weights()` returns e^{i phi}/sqrt(n)
/// so both kinds compete on the same inner-product gain.
class Codeword
{
public:
    static Codeword array(CVector weights);
    static Codeword ris(std::vector<double> phases);

    CodewordKind kind() const noexcept { return kind_; }
    std::size_t size() const noexcept { return weights_.size(); }
    const CVector &weights() const noexcept { return weights_; }
    // Unit-modulus RIS entries e^{i phi}; empty for array codewords.
    CVector ris_entries() const;
    const std::vector<double> &phases() const noexcept { return phases_; }

private:
    CodewordKind kind_ = CodewordKind::array;
    CVector weights_;
    std::vector<double> phases_;
};

struct Codebook
{
    std::vector<Codeword> codewords;
    std::vector<double> beam_angles;

    std::size_t size() const noexcept { return codewords.size(); }
    std::size_t dimension() const noexcept { return codewords.empty() ? 0 : codewords.front().size(); }
    void validate() const;
};

struct LinkBudget
{
    double tx_power_db = 10.0; // relative to noise_power
    double noise_power = 1.0;
    double antenna_gain_dbi = 2.0;

    double tx_power_linear() const;
};

/// Codeword b steers to theta_b with sin(theta_b) = -1 + 2b/n_beams.
Codebook dft_codebook(std::size_t n_ant, std::size_t n_beams);

/// Same beam directions as `dft_codebook`, realized as RIS phase profiles.
Codebook ris_codebook(std::size_t n_elem, std::size_t n_beams);

struct BeamChoice
{
    std::size_t index = 0;
    double gain = 0.0; // |w_b^H h|^2 on the first subcarrier
};

// |w^H h[:,0]|^2.
double beam_gain(const Codeword &cw, const ChannelState &h);

/// Exhaustive argmax over the codebook on the first subcarrier column; ties
/// go to the lowest index.
BeamChoice select_beam(const Codebook &cb, const ChannelState &h_reported);

/// tx * |w^H h_true|^2 / noise. The codeword may come from spoofed CSI.
double realized_snr(const ChannelState &h_true, const Codeword &cw, const LinkBudget &lb);

/// Shannon rate log2(1 + snr) [bit/s/Hz].
double achievable_rate(double snr);

double to_db(double linear);
double from_db(double db);

} // namespace beamsec

#endif
