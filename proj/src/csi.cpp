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

#include "beamsec/csi.hpp"

#include "beamsec/errors.hpp"

#include <cmath>
#include <numbers>

namespace beamsec
{

void CsiReport::refresh_phase()
{
    phase_shift.resize(h_hat.n_ant());
    for (std::size_t k = 0; k < h_hat.n_ant(); ++k)
    {
        // std::arg returns [-pi, pi]; fold -pi onto pi.
        double a = std::arg(h_hat(k, 0));
        if (a <= -std::numbers::pi)
            a = std::numbers::pi;
        phase_shift[k] = a;
    }
}

double CsiErrorModel::magnitude_cdf(double x) const
{
    if (x <= 0.0)
        return 0.0;
    if (sigma_e2 <= 0.0)
        return 1.0;
    return -std::expm1(-x * x / sigma_e2);
}

CVector make_pilot(std::size_t n_pilot)
{
    if (n_pilot == 0)
        throw invalid_argument("make_pilot: n_pilot must be >= 1");
    CVector p(n_pilot);
    const double n = static_cast<double>(n_pilot);
    for (std::size_t t = 0; t < n_pilot; ++t)
    {
        const double k = static_cast<double>(t);
        // Chu sequence; even and odd lengths use the k^2 and k(k+1) forms.
        const double ph = (n_pilot % 2 == 0) ? std::numbers::pi * k * k / n : std::numbers::pi * k * (k + 1.0) / n;
        p[t] = std::polar(1.0, ph);
    }
    return p;
}

ReceivedSignal transmit_pilot(const ChannelState &h_true, const CVector &pilot, double noise_var, Rng &rng)
{
    if (pilot.empty())
        throw invalid_argument("transmit_pilot: empty pilot");
    if (!(noise_var >= 0.0))
        throw invalid_argument("transmit_pilot: noise_var must be >= 0");
    for (const cd &s : pilot)
        if (std::abs(std::abs(s) - 1.0) > 1e-9)
            throw invalid_argument("transmit_pilot: pilot symbols must be unit modulus");

    ReceivedSignal sig;
    sig.n_ant = h_true.n_ant();
    sig.pilot = pilot;
    sig.noise_var = noise_var;
    sig.y.resize(sig.n_ant * pilot.size());
    const auto h = h_true.column(0);
    for (std::size_t t = 0; t < pilot.size(); ++t)
        for (std::size_t k = 0; k < sig.n_ant; ++k)
        {
            cd v = h[k] * pilot[t];
            if (noise_var > 0.0)
                v += rng.complex_normal(noise_var);
            sig.at(k, t) = v;
        }
    return sig;
}

CsiReport estimate_csi(const ReceivedSignal &sig)
{
    if (sig.pilot.empty() || sig.n_ant == 0 || sig.y.size() != sig.n_ant * sig.pilot.size())
        throw invalid_argument("estimate_csi: empty or inconsistent received signal");
    CsiReport rep;
    rep.h_hat = ChannelState(sig.n_ant, 1);
    const double inv = 1.0 / static_cast<double>(sig.pilot.size());
    for (std::size_t k = 0; k < sig.n_ant; ++k)
    {
        cd acc{0.0, 0.0};
        for (std::size_t t = 0; t < sig.pilot.size(); ++t)
            acc += sig.at(k, t) * std::conj(sig.pilot[t]);
        rep.h_hat(k, 0) = acc * inv;
    }
    rep.refresh_phase();
    return rep;
}

CsiReport estimate_wideband(const ChannelState &h_true, const CVector &pilot, double noise_var, Rng &rng,
                            ReceivedSignal *first_burst)
{
    CsiReport rep;
    rep.h_hat = ChannelState(h_true.n_ant(), h_true.n_sub(), h_true.block_id());
    ChannelState column(h_true.n_ant(), 1);
    for (std::size_t m = 0; m < h_true.n_sub(); ++m)
    {
        const auto src = h_true.column(m);
        std::copy(src.begin(), src.end(), column.column(0).begin());
        ReceivedSignal sig = transmit_pilot(column, pilot, noise_var, rng);
        const CsiReport one = estimate_csi(sig);
        const auto est = one.h_hat.column(0);
        std::copy(est.begin(), est.end(), rep.h_hat.column(m).begin());
        if (m == 0 && first_burst != nullptr)
            *first_burst = std::move(sig);
    }
    rep.refresh_phase();
    return rep;
}

std::vector<double> csi_error_samples(const CsiReport &report, const ChannelState &h_reference)
{
    if (report.h_hat.n_ant() != h_reference.n_ant() || report.h_hat.n_sub() != h_reference.n_sub())
        throw invalid_argument("csi_error_samples: report and reference dimensions differ");
    const auto a = report.h_hat.data();
    const auto b = h_reference.data();
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        out[i] = std::abs(a[i] - b[i]);
    return out;
}

} // namespace beamsec
