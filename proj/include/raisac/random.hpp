// SPDX-License-Identifier: Apache-2.0
//
// ra-isac: joint beamforming and array rotation for rotatable-antenna ISAC
// Copyright (C) 2026 The ra-isac authors
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
#ifndef RAISAC_RANDOM_HPP
#define RAISAC_RANDOM_HPP

#include <complex>
#include <cstdint>
#include <random>

namespace raisac
{
    // Seed derivation for independent streams: stream `id` of a run seeded with `seed`
    // is an mt19937_64 seeded with splitmix64(seed ^ splitmix64(id)). The standard
    // distributions are implementation-defined, so variates are produced here from the
    // raw 64-bit engine output to keep draws identical across toolchains.
    std::uint64_t splitmix64(std::uint64_t x);
    std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream_id);

    class RandomStream
    {
    public:
        RandomStream(std::uint64_t seed, std::uint64_t stream_id) : engine_(derive_seed(seed, stream_id)) {}

        double uniform();                       // [0, 1), 53 random bits
        double uniform(double lo, double hi);   // [lo, hi)
        double normal();                        // standard normal, Box-Muller
        std::complex<double> complex_normal(double variance); // CN(0, variance)

    private:
        std::mt19937_64 engine_;
    };
}

#endif
