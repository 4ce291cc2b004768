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
#include "raisac/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace raisac
{
    BeamformingSolution::BeamformingSolution(std::vector<CVec> beams) : beams_(std::move(beams))
    {
        if (beams_.empty())
            throw std::invalid_argument("BeamformingSolution: at least one beam required");
        const auto m = beams_.front().size();
        covariance_ = CMat::Zero(m, m);
        for (const auto &w : beams_)
        {
            if (w.size() != m)
                throw std::invalid_argument("BeamformingSolution: beams differ in length");
            covariance_.noalias() += w * w.adjoint();
        }
    }

    double BeamformingSolution::total_power() const
    {
        double p = 0.0;
        for (const auto &w : beams_)
            p += w.squaredNorm();
        return p;
    }

    WeightPair WeightPair::from_comm(double comm_weight)
    {
        WeightPair w{comm_weight, 1.0 - comm_weight};
        w.validate();
        return w;
    }

    void WeightPair::validate() const
    {
        if (!(comm_weight >= 0.0 && comm_weight <= 1.0) || !(sense_weight >= 0.0 && sense_weight <= 1.0))
            throw std::invalid_argument("weights must lie in [0, 1]");
        if (std::abs(comm_weight + sense_weight - 1.0) > 1e-12)
            throw std::invalid_argument("weights must sum to 1");
    }

    double sinr(std::span<const CVec> channels, std::span<const CVec> beams, std::span<const double> noise, int user_index)
    {
        if (user_index < 0 || user_index >= static_cast<int>(channels.size()))
            throw std::out_of_range("sinr: user index " + std::to_string(user_index) + " out of range");
        if (beams.size() != channels.size() || noise.size() != channels.size())
            throw std::invalid_argument("sinr: need one beam and one noise power per user");
        const CVec &h = channels[user_index];
        double interference = 0.0;
        double signal = 0.0;
        for (std::size_t i = 0; i < beams.size(); ++i)
        {
            const double g = std::norm(h.dot(beams[i])); // h^H w_i
            if (static_cast<int>(i) == user_index)
                signal = g;
            else
                interference += g;
        }
        return signal / (interference + noise[user_index]);
    }

    double sinr(const Scenario &scenario, std::span<const CVec> beams, int user_index, double rotation)
    {
        const auto channels = user_channels(scenario, rotation);
        return sinr(channels, beams, scenario.noise_powers, user_index);
    }

    double sum_rate(std::span<const CVec> channels, std::span<const CVec> beams, std::span<const double> noise)
    {
        double rate = 0.0;
        for (int k = 0; k < static_cast<int>(channels.size()); ++k)
            rate += std::log2(1.0 + sinr(channels, beams, noise, k));
        return rate;
    }

    double sum_rate(const Scenario &scenario, std::span<const CVec> beams, double rotation)
    {
        const auto channels = user_channels(scenario, rotation);
        return sum_rate(channels, beams, scenario.noise_powers);
    }

    namespace
    {
        constexpr double kInf = std::numeric_limits<double>::infinity();

        double illumination(const CMat &covariance, const CVec &a_t)
        {
            return (a_t.adjoint() * covariance * a_t)(0, 0).real();
        }

        // Illumination relative to its Cauchy-Schwarz ceiling M_t tr(W).
        bool dark(const CMat &covariance, double q)
        {
            const double ceiling = covariance.rows() * covariance.trace().real();
            return !(ceiling > 0.0) || q <= kCrbDegenerateThreshold * ceiling;
        }
    }

    CrbValue crb_direct(const CMat &covariance, const Scenario &scenario, double rotation)
    {
        const EffectiveAngle angle = effective_angle(scenario.target.nominal_angle, rotation);
        const CVec a_t = steering_vector(scenario.tx_geometry, angle);
        const double deriv_energy = steering_derivative(scenario.rx_geometry, angle).squaredNorm();
        const double broadside_energy = steering_derivative(scenario.rx_geometry, EffectiveAngle{0.0}).squaredNorm();
        const double q = illumination(covariance, a_t);
        if (deriv_energy <= kCrbDegenerateThreshold * broadside_energy || dark(covariance, q))
            return {kInf, true};
        const double denom = 2.0 * scenario.snapshots * scenario.target.sensing_snr * deriv_energy * q;
        return {1.0 / denom, false};
    }

    CrbValue crb_direct(const BeamformingSolution &solution, const Scenario &scenario, double rotation)
    {
        return crb_direct(solution.covariance(), scenario, rotation);
    }

    double crb_chi(const Scenario &scenario)
    {
        const double lambda = scenario.rx_geometry.wavelength();
        const double m = scenario.rx_geometry.num_elements();
        const double aperture = scenario.rx_geometry.aperture();
        return 3.0 * lambda * lambda * (m - 1.0) /
               (2.0 * kPi * kPi * scenario.snapshots * scenario.target.sensing_snr * m * (m + 1.0) * aperture * aperture);
    }

    CrbValue crb_closed(const CMat &covariance, const Scenario &scenario, double rotation)
    {
        const EffectiveAngle angle = effective_angle(scenario.target.nominal_angle, rotation);
        const double c = std::cos(angle.value);
        const double cos2 = c * c;
        const double q = illumination(covariance, steering_vector(scenario.tx_geometry, angle));
        if (cos2 <= kCrbDegenerateThreshold || dark(covariance, q))
            return {kInf, true};
        return {crb_chi(scenario) / (cos2 * q), false};
    }

    CrbValue crb_closed(const BeamformingSolution &solution, const Scenario &scenario, double rotation)
    {
        return crb_closed(solution.covariance(), scenario, rotation);
    }

    double sensing_objective(const CMat &covariance, const Scenario &scenario, double rotation)
    {
        const EffectiveAngle angle = effective_angle(scenario.target.nominal_angle, rotation);
        const double c = std::cos(angle.value);
        return c * c * std::max(0.0, illumination(covariance, steering_vector(scenario.tx_geometry, angle)));
    }

    double sensing_objective(const BeamformingSolution &solution, const Scenario &scenario, double rotation)
    {
        const EffectiveAngle angle = effective_angle(scenario.target.nominal_angle, rotation);
        const CVec a_t = steering_vector(scenario.tx_geometry, angle);
        const double c = std::cos(angle.value);
        double q = 0.0;
        for (const auto &w : solution.beams())
            q += std::norm(a_t.dot(w));
        return c * c * q;
    }

    BeamPattern beam_pattern(const CMat &covariance, const ArrayGeometry &tx, std::span<const double> angle_grid, double rotation)
    {
        if (angle_grid.empty())
            throw std::invalid_argument("beam_pattern: empty angle grid");
        BeamPattern pattern;
        pattern.raw_gains.reserve(angle_grid.size());
        for (double theta : angle_grid)
        {
            const CVec a = steering_vector(tx, effective_angle(theta, rotation));
            pattern.raw_gains.push_back(std::max(0.0, illumination(covariance, a)));
        }
        const double peak = *std::max_element(pattern.raw_gains.begin(), pattern.raw_gains.end());
        pattern.gains.assign(angle_grid.size(), 0.0);
        if (!(peak > 0.0))
        {
            pattern.all_zero = true;
            return pattern;
        }
        for (std::size_t i = 0; i < angle_grid.size(); ++i)
            pattern.gains[i] = pattern.raw_gains[i] / peak;
        return pattern;
    }

    BeamPattern beam_pattern(const BeamformingSolution &solution, const Scenario &scenario, std::span<const double> angle_grid, double rotation)
    {
        return beam_pattern(solution.covariance(), scenario.tx_geometry, angle_grid, rotation);
    }

    double array_correlation(double theta0, double theta1, int num_elements, double spacing)
    {
        // sin(theta1) - sin(theta0) = 2 cos(mean) sin(half-difference)
        const double u = 2.0 * std::cos(0.5 * (theta0 + theta1)) * std::sin(0.5 * (theta1 - theta0));
        const double x = kPi * spacing * u;
        const double den = std::sin(x);
        if (std::abs(den) < 1e-15)
            return static_cast<double>(num_elements);
        return std::abs(std::sin(num_elements * x) / den);
    }

    std::optional<double> rotation_gain(double theta0, double theta1, double rotation, int num_elements, double spacing)
    {
        const double fixed = array_correlation(theta0, theta1, num_elements, spacing);
        if (fixed < kCorrelationNullThreshold)
            return std::nullopt;
        return array_correlation(theta0 + rotation, theta1 + rotation, num_elements, spacing) / fixed;
    }

    std::optional<RotationGainOptimum> max_rotation_gain(double theta0, double theta1, int num_elements, double spacing)
    {
        if (theta0 == theta1)
            return RotationGainOptimum{1.0, 0.0};
        const double fixed = array_correlation(theta0, theta1, num_elements, spacing);
        if (fixed < kCorrelationNullThreshold)
            return std::nullopt;
        const double mean = 0.5 * (theta0 + theta1);
        double phi = 0.5 * kPi - mean;
        phi -= kPi * std::round(phi / kPi);
        return RotationGainOptimum{num_elements / fixed, phi};
    }

    double equivalent_aperture(double theta, double rotation, double receive_aperture)
    {
        return receive_aperture * std::cos(theta + rotation);
    }
}
