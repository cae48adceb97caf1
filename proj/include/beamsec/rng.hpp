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

#ifndef BEAMSEC_RNG_HPP
#define BEAMSEC_RNG_HPP

#include <complex>
#include <cstdint>
#include <random>

namespace beamsec
{

/// Seeded random source used by every stochastic operation.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. Distributions are implemented here rather than taken from
/// <random>, because the standard leaves their algorithms unspecified and
/// logs must be bit-identical across standard libraries:
///  - uniform(): top 53 bits of one engine draw, scaled to [0, 1);
///  - normal(): Box-Muller on two uniforms, second variate cached.
class Rng
{
public:
    explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n); n must be > 0.
    std::uint64_t below(std::uint64_t n);

    double normal();

    // Circularly symmetric complex Gaussian with E|z|^2 = variance.
    std::complex<double> complex_normal(double variance);

    // Poisson variate by inversion; adequate for the small means used here.
    std::uint64_t poisson(double mean);

private:
    std::mt19937_64 engine_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

// Seed for the index-th independent realization of a Monte-Carlo sweep.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept
{
    return base + index;
}

} // namespace beamsec

#endif
