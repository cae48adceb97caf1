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

#ifndef BEAMSEC_CSI_HPP
#define BEAMSEC_CSI_HPP

#include "beamsec/channel_model.hpp"

#include <cstdint>
#include <vector>

namespace beamsec
{

/// Received pilot observations at the base station, y [n_ant x n_pilot],
/// column-major (each pilot time slot contiguous).
struct ReceivedSignal
{
    std::size_t n_ant = 0;
    CVector y;
    CVector pilot; // known unit-modulus symbols
    double noise_var = 0.0;

    std::size_t n_pilot() const noexcept { return pilot.size(); }
    cd &at(std::size_t ant, std::size_t t) { return y[t * n_ant + ant]; }
    const cd &at(std::size_t ant, std::size_t t) const { return y[t * n_ant + ant]; }
};

struct CsiReport
{
    ChannelState h_hat;
    std::vector<double> phase_shift; // arg(h_hat[k, 0]) in (-pi, pi]
    std::uint32_t source_id = 0;
    std::int64_t timestamp = 0;
    bool tampered = false; // ground truth for evaluation harnesses only

    // Recomputes phase_shift from h_hat.
    void refresh_phase();
};

struct CsiErrorModel
{
    double sigma_e2 = 0.0; // per-entry variance of the additive CN estimation error

    // Reference CDF of |e|: Rayleigh with scale sqrt(sigma_e2/2), F(x) = 1 - exp(-x^2/sigma_e2).
    double magnitude_cdf(double x) const;
};

// Chu sequence of length n: unit modulus, constant amplitude.
CVector make_pilot(std::size_t n_pilot);

/// y[:, t] = h_true[:, 0] * pilot[t] + n_t, n_t ~ CN(0, noise_var) per entry.
ReceivedSignal transmit_pilot(const ChannelState &h_true, const CVector &pilot, double noise_var, Rng &rng);

/// Least-squares estimate h_hat[k] = (1/P) sum_t y[k,t] conj(pilot[t]). The
/// error is CN(0, noise_var / P) per entry.
CsiReport estimate_csi(const ReceivedSignal &sig);

/// One LS estimate per subcarrier column, each from its own pilot burst.
/// The burst of subcarrier 0 is returned in `first_burst` when non-null.
CsiReport estimate_wideband(const ChannelState &h_true, const CVector &pilot, double noise_var, Rng &rng,
                            ReceivedSignal *first_burst = nullptr);

/// |h_hat - h_ref| per entry, flattened column-major.
std::vector<double> csi_error_samples(const CsiReport &report, const ChannelState &h_reference);

// Error variance of the LS estimator.
inline CsiErrorModel ls_error_model(double noise_var, std::size_t n_pilot)
{
    return {noise_var / static_cast<double>(n_pilot)};
}

} // namespace beamsec

#endif
