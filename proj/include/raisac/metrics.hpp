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
#ifndef RAISAC_METRICS_HPP
#define RAISAC_METRICS_HPP

#include <optional>
#include <span>
#include <vector>

#include "raisac/channel.hpp"

namespace raisac
{
    // Per-user transmit beams and the transmit covariance W = sum_k w_k w_k^H.
    class BeamformingSolution
    {
    public:
        BeamformingSolution() = default;
        explicit BeamformingSolution(std::vector<CVec> beams);

        const std::vector<CVec> &beams() const { return beams_; }
        const CMat &covariance() const { return covariance_; }
        int num_beams() const { return static_cast<int>(beams_.size()); }
        int num_elements() const { return static_cast<int>(covariance_.rows()); }
        double total_power() const; // sum_k ||w_k||^2 == tr(W)

    private:
        std::vector<CVec> beams_;
        CMat covariance_;
    };

    // Communication and sensing weights of the scalarized objective; they sum to one.
    struct WeightPair
    {
        double comm_weight = 0.5;
        double sense_weight = 0.5;

        static WeightPair from_comm(double comm_weight); // throws unless comm_weight in [0, 1]
        void validate() const;
        bool operator==(const WeightPair &) const = default;
    };

    double sinr(std::span<const CVec> channels, std::span<const CVec> beams, std::span<const double> noise, int user_index);
    double sinr(const Scenario &scenario, std::span<const CVec> beams, int user_index, double rotation);

    // Sum of log2(1 + SINR_k), bits/s/Hz.
    double sum_rate(std::span<const CVec> channels, std::span<const CVec> beams, std::span<const double> noise);
    double sum_rate(const Scenario &scenario, std::span<const CVec> beams, double rotation);

    // CRB value in rad^2. Degenerate inputs (no receive aperture projection, i.e. cos = 0,
    // or no power toward the target) yield value = +inf with the flag set.
    struct CrbValue
    {
        double value = 0.0;
        bool degenerate = false;
    };

    // Normalized geometry factors below this are treated as zero in the CRB denominators.
    inline constexpr double kCrbDegenerateThreshold = 1e-30;

    // 1 / (2 T SNR_s ||da_R||^2 a_T^H W a_T), evaluated directly from the steering primitives.
    CrbValue crb_direct(const CMat &covariance, const Scenario &scenario, double rotation);
    CrbValue crb_direct(const BeamformingSolution &solution, const Scenario &scenario, double rotation);

    // chi / (cos^2 a_T^H W a_T) using the ULA closed form of ||da_R||^2.
    CrbValue crb_closed(const CMat &covariance, const Scenario &scenario, double rotation);
    CrbValue crb_closed(const BeamformingSolution &solution, const Scenario &scenario, double rotation);

    // chi = 3 lambda^2 (M_r - 1) / (2 pi^2 T SNR_s M_r (M_r + 1) D_r^2)
    double crb_chi(const Scenario &scenario);

    // f_s = cos^2(theta + phi) a_T^H W a_T
    double sensing_objective(const CMat &covariance, const Scenario &scenario, double rotation);
    double sensing_objective(const BeamformingSolution &solution, const Scenario &scenario, double rotation);

    // Transmit gain a_T^H(theta + rotation) W a_T(theta + rotation) over `angle_grid`, normalized
    // so the grid maximum is 1. An all-zero covariance leaves the pattern at zero and sets `all_zero`.
    struct BeamPattern
    {
        std::vector<double> gains;
        std::vector<double> raw_gains;
        bool all_zero = false;
    };
    BeamPattern beam_pattern(const CMat &covariance, const ArrayGeometry &tx, std::span<const double> angle_grid, double rotation);
    BeamPattern beam_pattern(const BeamformingSolution &solution, const Scenario &scenario, std::span<const double> angle_grid, double rotation);

    // |a^H(x) a(y)| for a ULA with `spacing` in wavelengths: |sin(M pi s u) / sin(pi s u)|, u = sin y - sin x.
    double array_correlation(double theta0, double theta1, int num_elements, double spacing = 0.5);

    // Fixed-array correlation below this counts as a Dirichlet null.
    inline constexpr double kCorrelationNullThreshold = 1e-12;

    // Rotation gain |a^H(theta0+phi) a(theta1+phi)| / |a^H(theta0) a(theta1)|.
    // std::nullopt signals an unbounded gain (fixed-array correlation at a null).
    std::optional<double> rotation_gain(double theta0, double theta1, double rotation, int num_elements, double spacing = 0.5);

    struct RotationGainOptimum
    {
        double gain = 1.0;
        double rotation = 0.0;
    };

    // Unconstrained maximum of the rotation gain. The optimum aligns the mean effective angle with
    // endfire, phi* + (theta0 + theta1)/2 = pi/2 + n pi; the n of smallest |phi*| is returned.
    std::optional<RotationGainOptimum> max_rotation_gain(double theta0, double theta1, int num_elements, double spacing = 0.5);

    // D_SEA = D_r cos(theta + phi)
    double equivalent_aperture(double theta, double rotation, double receive_aperture);
}

#endif
