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
#ifndef RAISAC_SOLVER_HPP
#define RAISAC_SOLVER_HPP

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "raisac/metrics.hpp"

namespace raisac
{
    enum class InitScheme
    {
        MrtEqualPower,
        Random,
        MultiStart, // equal-power MRT, one lead-user start per user and a target-aligned start; best kept
    };

    struct SolverOptions
    {
        int max_bcd_iters = 200;
        double rel_tolerance = 1e-6; // on the relative change of the surrogate objective
        double mu_tolerance = 1e-10; // on the relative power residual of the multiplier search
        int mu_max_iters = 200;
        InitScheme init_scheme = InitScheme::MultiStart;
        std::uint64_t init_seed = 0; // only used by InitScheme::Random

        void validate() const;
        bool operator==(const SolverOptions &) const = default;
    };

    // Thrown when the power multiplier cannot be bracketed or resolved within the iteration cap.
    class MultiplierSearchError : public std::runtime_error
    {
    public:
        MultiplierSearchError(const std::string &what, double residual) : std::runtime_error(what), residual_(residual) {}
        double residual() const { return residual_; }

    private:
        double residual_;
    };

    class SingularChannelError : public std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    // Auxiliary variables of the quadratic-transform surrogate plus the beams.
    struct BcdState
    {
        std::vector<CVec> beams;
        std::vector<double> alpha;
        std::vector<cplx> b;
        std::vector<cplx> b_s;
        std::vector<double> objective_trace; // surrogate value after each full sweep
    };

    // Everything one inner solve needs at a fixed rotation, precomputed once.
    struct InnerProblem
    {
        std::vector<CVec> channels;
        CVec target_steering;
        double cos2 = 1.0;
        std::vector<double> noise;
        double power_budget = 1.0;
        WeightPair weights;

        static InnerProblem build(const Scenario &scenario, double rotation, WeightPair weights);

        int num_users() const { return static_cast<int>(channels.size()); }
        int num_elements() const { return static_cast<int>(target_steering.size()); }

        // Weight of the rate terms in natural-log units, comm_weight / ln 2. With it the
        // SINR is the exact maximizer over alpha of the surrogate.
        double rate_weight() const;
        double sense_gain() const; // sqrt(sense_weight cos^2)

        double objective(std::span<const CVec> beams) const; // comm_weight f_c + sense_weight f_s
    };

    // Surrogate objective
    //   sum_k [ w1 log2(1+a_k) - c a_k + 2 sqrt(c (1+a_k)) Re{b_k^* h_k^H w_k}
    //           - |b_k|^2 (sum_i |h_k^H w_i|^2 + s_k^2) + 2 g_s Re{b_sk^* a^H w_k} - |b_sk|^2 ]
    // with c = rate_weight() and g_s = sense_gain().
    double transformed_objective(const BcdState &state, const InnerProblem &problem);
    double transformed_objective(const BcdState &state, const Scenario &scenario, double rotation, WeightPair weights);

    // Block maximizers. Each returns the new block and leaves the state untouched.
    std::vector<double> update_alpha(const BcdState &state, const InnerProblem &problem);
    std::vector<cplx> update_b(const BcdState &state, const InnerProblem &problem);
    std::vector<cplx> update_bs(const BcdState &state, const InnerProblem &problem);

    struct BeamUpdate
    {
        std::vector<CVec> beams;
        double mu = 0.0;    // power multiplier
        double power = 0.0; // sum_k ||w_k||^2
    };
    BeamUpdate update_w(const BcdState &state, const InnerProblem &problem, const SolverOptions &options);

    inline constexpr double kAlphaFloor = 1e-12;

    struct InnerSolveResult
    {
        BeamformingSolution solution;
        double objective = 0.0; // g(phi) = comm_weight f_c + sense_weight f_s
        BcdState state;
        bool converged = false; // false: iteration cap hit, best (last) iterate returned
        int iterations = 0;
    };

    // Generalized FP block coordinate ascent at a fixed rotation. `warm_start`, when given,
    // replaces the configured initialization (rescaled into the power budget if needed). With
    // MultiStart the returned state and trace are those of the winning start.
    InnerSolveResult fp_bcd_solve(const Scenario &scenario, double rotation, WeightPair weights, const SolverOptions &options,
                                  const std::vector<CVec> *warm_start = nullptr);

    // sqrt(P) h_k / ||h_k||
    CVec mrt_beam(const Scenario &scenario, int user_index, double rotation, double power);

    // Zero-forcing directions (columns of H^H (H H^H)^-1), each scaled to power P / K.
    std::vector<CVec> zf_beams(const Scenario &scenario, double rotation, double power);
    std::vector<CVec> zf_beams(std::span<const CVec> channels, double power);

    // W* = (P / M_t) a_T a_T^H as the single beam sqrt(P / M_t) a_T.
    BeamformingSolution sensing_optimal_covariance(const Scenario &scenario, double rotation, double power);
}

#endif
