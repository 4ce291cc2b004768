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
#include "raisac/channel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "raisac/random.hpp"

namespace raisac
{
    namespace
    {
        [[noreturn]] void fail(const std::string &what) { throw std::invalid_argument(what); }

        bool finite(double x) { return std::isfinite(x); }
    }

    void Scenario::validate() const
    {
        if (users.empty())
            fail("scenario.users: at least one user required");
        if (noise_powers.size() != users.size())
            fail("scenario.noise_powers: expected " + std::to_string(users.size()) + " entries");
        for (std::size_t k = 0; k < users.size(); ++k)
        {
            const std::string where = "scenario.users[" + std::to_string(k) + "]";
            if (users[k].empty())
                fail(where + ": at least one path required");
            if (std::abs(users[k][0].gain) <= 0.0)
                fail(where + "[0]: LoS gain must be nonzero");
            for (const auto &p : users[k])
                if (!finite(p.gain.real()) || !finite(p.gain.imag()) || !finite(p.nominal_angle))
                    fail(where + ": non-finite path parameter");
            if (!(noise_powers[k] > 0.0) || !finite(noise_powers[k]))
                fail("scenario.noise_powers[" + std::to_string(k) + "]: must be positive");
        }
        if (!(target.sensing_snr > 0.0) || !finite(target.sensing_snr))
            fail("scenario.target.sensing_snr: must be positive");
        if (!finite(target.nominal_angle))
            fail("scenario.target.angle_rad: must be finite");
        if (snapshots < 1)
            fail("scenario.snapshots: must be >= 1");
        if (!(power_budget > 0.0) || !finite(power_budget))
            fail("scenario.power_budget: must be positive");
        if (!(rotation_region.lo <= rotation_region.hi) || !finite(rotation_region.lo) || !finite(rotation_region.hi))
            fail("scenario.rotation_region: need finite lo <= hi");
    }

    void ScenarioDistribution::validate() const
    {
        if (num_users < 1)
            fail("distribution.num_users: must be >= 1");
        if (num_nlos_paths < 0)
            fail("distribution.num_nlos_paths: must be >= 0");
        if (tx_elements < 2)
            fail("distribution.tx_elements: must be >= 2");
        if (rx_elements < 2)
            fail("distribution.rx_elements: must be >= 2");
        if (!(spacing > 0.0))
            fail("distribution.spacing: must be positive");
        if (!(wavelength > 0.0))
            fail("distribution.wavelength: must be positive");
        if (snapshots < 1)
            fail("distribution.snapshots: must be >= 1");
        if (!(power_budget > 0.0))
            fail("distribution.power_budget: must be positive");
        if (!(noise_power > 0.0))
            fail("distribution.noise_power: must be positive");
        if (!(target_angle_range.lo <= target_angle_range.hi))
            fail("distribution.target_angle_range: need lo <= hi");
        if (!(path_angle_range.lo <= path_angle_range.hi))
            fail("distribution.path_angle_range: need lo <= hi");
        if (!(rotation_region.lo <= rotation_region.hi))
            fail("distribution.rotation_region: need lo <= hi");
        if (!finite(path_gain_db) || !finite(sensing_snr_db))
            fail("distribution: gains in dB must be finite");
    }

    CVec user_channel(const Scenario &scenario, int user_index, double rotation)
    {
        if (user_index < 0 || user_index >= scenario.num_users())
            throw std::out_of_range("user_channel: user index " + std::to_string(user_index) + " out of range");
        CVec h = CVec::Zero(scenario.tx_geometry.num_elements());
        for (const auto &path : scenario.users[user_index])
            h += std::conj(path.gain) * steering_vector(scenario.tx_geometry, effective_angle(path.nominal_angle, rotation));
        return h;
    }

    std::vector<CVec> user_channels(const Scenario &scenario, double rotation)
    {
        std::vector<CVec> channels;
        channels.reserve(scenario.users.size());
        for (int k = 0; k < scenario.num_users(); ++k)
            channels.push_back(user_channel(scenario, k, rotation));
        return channels;
    }

    CMat sensing_channel(const Scenario &scenario, double rotation)
    {
        const EffectiveAngle angle = effective_angle(scenario.target.nominal_angle, rotation);
        const CVec a_r = steering_vector(scenario.rx_geometry, angle);
        const CVec a_t = steering_vector(scenario.tx_geometry, angle);
        return std::sqrt(scenario.target.sensing_snr) * (a_r * a_t.adjoint());
    }

    Scenario draw_scenario(const ScenarioDistribution &dist, std::uint64_t seed)
    {
        dist.validate();

        Scenario s;
        s.tx_geometry = ArrayGeometry(dist.tx_elements, dist.spacing, dist.wavelength);
        s.rx_geometry = ArrayGeometry(dist.rx_elements, dist.spacing, dist.wavelength);
        s.snapshots = dist.snapshots;
        s.power_budget = dist.power_budget;
        s.rotation_region = dist.rotation_region;
        s.noise_powers.assign(static_cast<std::size_t>(dist.num_users), dist.noise_power);

        RandomStream target_stream(seed, 0);
        s.target.nominal_angle = target_stream.uniform(dist.target_angle_range.lo, dist.target_angle_range.hi);
        s.target.sensing_snr = std::pow(10.0, dist.sensing_snr_db / 10.0);

        const double path_power = dist.noise_power * std::pow(10.0, dist.path_gain_db / 10.0);
        s.users.resize(static_cast<std::size_t>(dist.num_users));
        for (int k = 0; k < dist.num_users; ++k)
        {
            RandomStream rng(seed, 1 + static_cast<std::uint64_t>(k));
            auto &paths = s.users[k];
            paths.reserve(static_cast<std::size_t>(dist.num_nlos_paths) + 1);

            const double los_angle = rng.uniform(dist.path_angle_range.lo, dist.path_angle_range.hi);
            const double los_phase = rng.uniform(0.0, 2.0 * kPi);
            paths.push_back({std::polar(std::sqrt(path_power), los_phase), los_angle});

            for (int l = 0; l < dist.num_nlos_paths; ++l)
            {
                const double angle = rng.uniform(dist.path_angle_range.lo, dist.path_angle_range.hi);
                paths.push_back({rng.complex_normal(path_power), angle});
            }
        }
        return s;
    }
}
