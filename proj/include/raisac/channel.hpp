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
#ifndef RAISAC_CHANNEL_HPP
#define RAISAC_CHANNEL_HPP

#include <cstdint>
#include <vector>

#include "raisac/geometry.hpp"

namespace raisac
{
    // One propagation path of a user channel. The first path of every user is the LoS path.
    struct PathComponent
    {
        cplx gain;
        double nominal_angle = 0.0;

        bool operator==(const PathComponent &) const = default;
    };

    struct SensingTargetSpec
    {
        double nominal_angle = 0.0;
        double sensing_snr = 0.1; // |beta_s|^2 / sigma_s^2, linear

        bool operator==(const SensingTargetSpec &) const = default;
    };

    struct Interval
    {
        double lo = 0.0;
        double hi = 0.0;

        bool contains(double x) const { return x >= lo && x <= hi; }
        double clamp(double x) const { return x < lo ? lo : (x > hi ? hi : x); }
        bool operator==(const Interval &) const = default;
    };

    struct Scenario
    {
        ArrayGeometry tx_geometry{16};
        ArrayGeometry rx_geometry{16};
        std::vector<std::vector<PathComponent>> users;
        std::vector<double> noise_powers;
        SensingTargetSpec target;
        int snapshots = 100;
        double power_budget = 1.0;
        Interval rotation_region{-kPi / 6.0, kPi / 6.0};

        int num_users() const { return static_cast<int>(users.size()); }

        // Throws std::invalid_argument naming the first violated invariant.
        void validate() const;

        bool operator==(const Scenario &) const = default;
    };

    // Random scenario family. Defaults reproduce the standard evaluation setup:
    // 16x16 arrays, 4 users with 1 LoS + 5 NLoS paths, 0 dB per-path gain, -10 dB sensing SNR.
    struct ScenarioDistribution
    {
        int num_users = 4;
        int num_nlos_paths = 5;
        int tx_elements = 16;
        int rx_elements = 16;
        double spacing = 0.5;    // wavelengths
        double wavelength = 1.0;
        int snapshots = 100;
        double power_budget = 1.0;
        double noise_power = 1.0;
        Interval target_angle_range{-kPi / 3.0, kPi / 3.0};
        Interval path_angle_range{-kPi / 3.0, kPi / 3.0};
        double path_gain_db = 0.0;
        double sensing_snr_db = -10.0;
        Interval rotation_region{-kPi / 6.0, kPi / 6.0};

        void validate() const;
        bool operator==(const ScenarioDistribution &) const = default;
    };

    // h_k = sum_l conj(beta_{k,l}) a(theta_{k,l} + rotation), so h_k^H = sum_l beta_{k,l} a^H(.)
    CVec user_channel(const Scenario &scenario, int user_index, double rotation);

    // All K user channels at one rotation, in user order.
    std::vector<CVec> user_channels(const Scenario &scenario, double rotation);

    // beta_s a_R a_T^H (M_r x M_t) with beta_s = sqrt(SNR_s) taking sigma_s = 1.
    CMat sensing_channel(const Scenario &scenario, double rotation);

    // Stream 0 draws the target angle; stream 1 + k draws user k's paths in order
    // (LoS angle, LoS phase, then angle and gain of each NLoS path).
    Scenario draw_scenario(const ScenarioDistribution &dist, std::uint64_t seed);
}

#endif
