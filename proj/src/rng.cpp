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

#include "beamsec/rng.hpp"

#include <cmath>
#include <numbers>

namespace beamsec
{

std::uint64_t Rng::below(std::uint64_t n)
{
    // Rejection keeps the result exactly uniform.
    const std::uint64_t limit = (~std::uint64_t{0}) - ((~std::uint64_t{0}) % n);
    std::uint64_t x;
    do
    {
        x = engine_();
    } while (x >= limit);
    return x % n;
}

double Rng::normal()
{
    if (has_cached_)
    {
        has_cached_ = false;
        return cached_;
    }
    double u1;
    do
    {
        u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    cached_ = r * std::sin(a);
    has_cached_ = true;
    return r * std::cos(a);
}

std::complex<double> Rng::complex_normal(double variance)
{
    const double s = std::sqrt(0.5 * variance);
    const double re = normal();
    const double im = normal();
    return {s * re, s * im};
}

std::uint64_t Rng::poisson(double mean)
{
    if (mean <= 0.0)
        return 0;
    const double l = std::exp(-mean);
    std::uint64_t k = 0;
    double p = uniform();
    while (p > l)
    {
        ++k;
        p *= uniform();
    }
    return k;
}

} // namespace beamsec
