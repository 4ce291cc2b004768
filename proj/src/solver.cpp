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
#include "raisac/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

#include "raisac/random.hpp"

namespace raisac
{
    void SolverOptions::validate() const
    {
        if (max_bcd_iters < 1)
            throw std::invalid_argument("options.max_bcd_iters: must be >= 1");
        if (!(rel_tolerance > 0.0))
            throw std::invalid_argument("options.rel_tolerance: must be positive");
        if (!(mu_tolerance > 0.0))
            throw std::invalid_argument("options.mu_tolerance: must be positive");
        if (mu_max_iters < 1)
            throw std::invalid_argument("options.mu_max_iters: must be >= 1");
    }

    InnerProblem InnerProblem::build(const Scenario &scenario, double rotation, WeightPair weights)
    {
        weights.validate();
        InnerProblem p;
        p.channels = user_channels(scenario, rotation);
        const EffectiveAngle angle = effective_angle(scenario.target.nominal_angle, rotation);
        p.target_steering = steering_vector(scenario.tx_geometry, angle);
        const double c = std::cos(angle.value);
        p.cos2 = c * c;
        p.noise = scenario.noise_powers;
        p.power_budget = scenario.power_budget;
        p.weights = weights;
        return p;
    }

    double InnerProblem::rate_weight() const { return weights.comm_weight / std::numbers::ln2; }

    double InnerProblem::sense_gain() const { return std::sqrt(weights.sense_weight * cos2); }

    double InnerProblem::objective(std::span<const CVec> beams) const
    {
        double illum = 0.0;
        for (const auto &w : beams)
            illum += std::norm(target_steering.dot(w));
        const double fc = weights.comm_weight > 0.0 ? sum_rate(channels, beams, noise) : 0.0;
        return weights.comm_weight * fc + weights.sense_weight * cos2 * illum;
    }

    namespace
    {
        // |h_k^H w_i|^2 summed over i, plus noise
        double received_power(const InnerProblem &p, std::span<const CVec> beams, int k)
        {
            double total = p.noise[k];
            for (const auto &w : beams)
                total += std::norm(p.channels[k].dot(w));
            return total;
        }

        void check_state(const BcdState &s, const InnerProblem &p)
        {
            const auto k = static_cast<std::size_t>(p.num_users());
            if (s.beams.size() != k || s.alpha.size() != k || s.b.size() != k || s.b_s.size() != k)
                throw std::invalid_argument("BcdState: block sizes do not match the number of users");
        }
    }

    double transformed_objective(const BcdState &state, const InnerProblem &problem)
    {
        check_state(state, problem);
        const double w1 = problem.weights.comm_weight;
        const double c = problem.rate_weight();
        const double gs = problem.sense_gain();
        double f = 0.0;
        for (int k = 0; k < problem.num_users(); ++k)
        {
            const double a = state.alpha[k];
            const cplx hw = problem.channels[k].dot(state.beams[k]);
            const cplx aw = problem.target_steering.dot(state.beams[k]);
            f += w1 * std::log2(1.0 + a) - c * a;
            f += 2.0 * std::sqrt(c * (1.0 + a)) * (std::conj(state.b[k]) * hw).real();
            f -= std::norm(state.b[k]) * received_power(problem, state.beams, k);
            f += 2.0 * gs * (std::conj(state.b_s[k]) * aw).real();
            f -= std::norm(state.b_s[k]);
        }
        return f;
    }

    double transformed_objective(const BcdState &state, const Scenario &scenario, double rotation, WeightPair weights)
    {
        return transformed_objective(state, InnerProblem::build(scenario, rotation, weights));
    }

    std::vector<double> update_alpha(const BcdState &state, const InnerProblem &problem)
    {
        std::vector<double> alpha(state.beams.size());
        for (int k = 0; k < problem.num_users(); ++k)
            alpha[k] = std::max(kAlphaFloor, sinr(problem.channels, state.beams, problem.noise, k));
        return alpha;
    }

    std::vector<cplx> update_b(const BcdState &state, const InnerProblem &problem)
    {
        const double c = problem.rate_weight();
        std::vector<cplx> b(state.beams.size());
        for (int k = 0; k < problem.num_users(); ++k)
        {
            const cplx hw = problem.channels[k].dot(state.beams[k]);
            b[k] = std::sqrt(c * (1.0 + state.alpha[k])) * hw / received_power(problem, state.beams, k);
        }
        return b;
    }

    std::vector<cplx> update_bs(const BcdState &state, const InnerProblem &problem)
    {
        const double gs = problem.sense_gain();
        std::vector<cplx> bs(state.beams.size());
        for (int k = 0; k < problem.num_users(); ++k)
            bs[k] = gs * problem.target_steering.dot(state.beams[k]);
        return bs;
    }

    BeamUpdate update_w(const BcdState &state, const InnerProblem &problem, const SolverOptions &options)
    {
        check_state(state, problem);
        const int num_users = problem.num_users();
        const int m = problem.num_elements();
        const double budget = problem.power_budget;
        const double c = problem.rate_weight();
        const double gs = problem.sense_gain();

        CMat gram = CMat::Zero(m, m);
        std::vector<CVec> h_eff(num_users);
        double eff_energy = 0.0;
        for (int k = 0; k < num_users; ++k)
        {
            gram.selfadjointView<Eigen::Lower>().rankUpdate(problem.channels[k], std::norm(state.b[k]));
            h_eff[k] = state.b[k] * std::sqrt(c * (1.0 + state.alpha[k])) * problem.channels[k] +
                       state.b_s[k] * gs * problem.target_steering;
            eff_energy += h_eff[k].squaredNorm();
        }

        BeamUpdate out;
        if (!(eff_energy > 0.0))
        {
            out.beams.assign(num_users, CVec::Zero(m));
            return out;
        }

        // (mu I + A)^-1 in the eigenbasis of A makes the beam power a scalar function of mu.
        Eigen::SelfAdjointEigenSolver<CMat> eig(gram, Eigen::ComputeEigenvectors);
        Eigen::VectorXd lambda = eig.eigenvalues().cwiseMax(0.0);
        const double lambda_max = lambda.maxCoeff();
        const double null_level = 1e-12 * std::max(lambda_max, 1e-300);

        Eigen::MatrixXd energy(m, num_users); // |U^H h_eff,k|^2 per eigen-direction
        CMat proj(m, num_users);
        for (int k = 0; k < num_users; ++k)
        {
            proj.col(k) = eig.eigenvectors().adjoint() * h_eff[k];
            energy.col(k) = proj.col(k).cwiseAbs2();
        }
        const Eigen::VectorXd dir_energy = energy.rowwise().sum();

        double null_energy = 0.0;
        for (int i = 0; i < m; ++i)
            if (lambda[i] <= null_level)
                null_energy += dir_energy[i];

        auto power_at = [&](double mu) {
            double p = 0.0;
            for (int i = 0; i < m; ++i)
            {
                const double den = lambda[i] + mu;
                if (den > null_level)
                    p += dir_energy[i] / (den * den);
            }
            return p;
        };

        double mu = 0.0;
        const bool range_only = null_energy <= 1e-20 * eff_energy;
        if (!range_only || power_at(0.0) > budget)
        {
            double hi = 1.0;
            int doublings = 0;
            while (power_at(hi) > budget)
            {
                hi *= 2.0;
                if (++doublings > options.mu_max_iters)
                    throw MultiplierSearchError("update_w: could not bracket the power multiplier",
                                                power_at(hi) / budget - 1.0);
            }
            double lo = 0.0;
            int iters = 0;
            while (budget - power_at(hi) > options.mu_tolerance * budget)
            {
                const double mid = 0.5 * (lo + hi);
                if (mid <= lo || mid >= hi)
                    break; // interval exhausted at double precision
                if (power_at(mid) > budget)
                    lo = mid;
                else
                    hi = mid;
                if (++iters > options.mu_max_iters)
                    throw MultiplierSearchError("update_w: multiplier bisection did not converge",
                                                power_at(hi) / budget - 1.0);
            }
            mu = hi;

            // Safeguarded Newton on 1/sqrt(p(mu)) - 1/sqrt(P) inside [lo, hi]. The bisection
            // residual alone leaves the block update suboptimal by about mu * tol * P.
            auto dpower_at = [&](double x) {
                double d = 0.0;
                for (int i = 0; i < m; ++i)
                {
                    const double den = lambda[i] + x;
                    if (den > null_level)
                        d -= 2.0 * dir_energy[i] / (den * den * den);
                }
                return d;
            };
            double x = hi;
            for (int n = 0; n < 60; ++n)
            {
                const double p = power_at(x);
                if (std::abs(p - budget) <= 1e-15 * budget)
                    break;
                (p > budget ? lo : hi) = x;
                const double psi = 1.0 / std::sqrt(p) - 1.0 / std::sqrt(budget);
                const double dpsi = -0.5 * dpower_at(x) / (p * std::sqrt(p));
                double next = x - psi / dpsi;
                if (!(next > lo && next < hi))
                    next = 0.5 * (lo + hi);
                if (next == x)
                    break;
                x = next;
            }
            if (power_at(x) <= budget * (1.0 + 1e-12))
                mu = x;
        }

        Eigen::VectorXd inv(m);
        for (int i = 0; i < m; ++i)
        {
            const double den = lambda[i] + mu;
            inv[i] = den > null_level ? 1.0 / den : 0.0;
        }
        out.beams.resize(num_users);
        for (int k = 0; k < num_users; ++k)
        {
            out.beams[k] = eig.eigenvectors() * inv.asDiagonal() * proj.col(k);
            out.power += out.beams[k].squaredNorm();
        }
        out.mu = mu;
        return out;
    }

    namespace
    {
        std::vector<CVec> initial_beams(const InnerProblem &p, const SolverOptions &options)
        {
            const int k = p.num_users();
            const int m = p.num_elements();
            std::vector<CVec> beams(k);
            if (options.init_scheme == InitScheme::Random)
            {
                RandomStream rng(options.init_seed, 0);
                double total = 0.0;
                for (auto &w : beams)
                {
                    w.resize(m);
                    for (int i = 0; i < m; ++i)
                        w[i] = rng.complex_normal(1.0);
                    total += w.squaredNorm();
                }
                const double scale = std::sqrt(p.power_budget / total);
                for (auto &w : beams)
                    w *= scale;
                return beams;
            }
            const double per_user = p.power_budget / k;
            for (int u = 0; u < k; ++u)
            {
                const double norm = p.channels[u].norm();
                beams[u] = norm > 0.0 ? CVec(std::sqrt(per_user) / norm * p.channels[u])
                                      : CVec(CVec::Constant(m, cplx(std::sqrt(per_user / m), 0.0)));
            }
            return beams;
        }
    }

    namespace
    {
        void fit_budget(std::vector<CVec> &beams, double budget)
        {
            double power = 0.0;
            for (const auto &w : beams)
                power += w.squaredNorm();
            if (power > budget)
                for (auto &w : beams)
                    w *= std::sqrt(budget / power);
        }

        InnerSolveResult ascend(const InnerProblem &problem, std::vector<CVec> beams, const SolverOptions &options)
        {
            const int k = problem.num_users();
            BcdState state;
            state.beams = std::move(beams);
            state.alpha.assign(k, kAlphaFloor);
            state.b.assign(k, cplx{});
            state.b_s.assign(k, cplx{});

            InnerSolveResult result;
            for (int it = 0; it < options.max_bcd_iters; ++it)
            {
                state.alpha = update_alpha(state, problem);
                state.b = update_b(state, problem);
                state.b_s = update_bs(state, problem);
                state.beams = update_w(state, problem, options).beams;

                const double f = transformed_objective(state, problem);
                state.objective_trace.push_back(f);
                result.iterations = it + 1;
                if (state.objective_trace.size() >= 2)
                {
                    const double prev = state.objective_trace[state.objective_trace.size() - 2];
                    if (std::abs(f - prev) <= options.rel_tolerance * std::max(std::abs(f), 1e-300))
                    {
                        result.converged = true;
                        break;
                    }
                }
            }

            result.objective = problem.objective(state.beams);
            result.solution = BeamformingSolution(state.beams);
            result.state = std::move(state);
            return result;
        }

        // Equal-power MRT, then one start per user carrying most of the power, then all beams on
        // the target direction. The weighted sum-rate surface has one basin per active user set.
        std::vector<std::vector<CVec>> portfolio_starts(const InnerProblem &p)
        {
            const int k = p.num_users();
            const int m = p.num_elements();
            std::vector<CVec> dir(k);
            for (int u = 0; u < k; ++u)
            {
                const double norm = p.channels[u].norm();
                dir[u] = norm > 0.0 ? CVec(p.channels[u] / norm) : CVec(CVec::Constant(m, cplx(1.0 / std::sqrt(m), 0.0)));
            }
            std::vector<std::vector<CVec>> starts;
            starts.push_back(initial_beams(p, SolverOptions{}));
            if (k > 1)
                for (int lead = 0; lead < k; ++lead)
                {
                    std::vector<CVec> beams(k);
                    for (int u = 0; u < k; ++u)
                        beams[u] = std::sqrt(p.power_budget * (u == lead ? 0.9 : 0.1 / (k - 1))) * dir[u];
                    starts.push_back(std::move(beams));
                }
            const CVec a = p.target_steering / p.target_steering.norm();
            starts.emplace_back(k, std::sqrt(p.power_budget / k) * a);
            return starts;
        }
    }

    InnerSolveResult fp_bcd_solve(const Scenario &scenario, double rotation, WeightPair weights, const SolverOptions &options,
                                  const std::vector<CVec> *warm_start)
    {
        options.validate();
        const InnerProblem problem = InnerProblem::build(scenario, rotation, weights);
        const int k = problem.num_users();

        if (warm_start)
        {
            if (static_cast<int>(warm_start->size()) != k)
                throw std::invalid_argument("fp_bcd_solve: warm start has the wrong number of beams");
            std::vector<CVec> beams = *warm_start;
            fit_budget(beams, problem.power_budget);
            return ascend(problem, std::move(beams), options);
        }
        if (options.init_scheme != InitScheme::MultiStart)
            return ascend(problem, initial_beams(problem, options), options);

        InnerSolveResult best;
        bool first = true;
        for (auto &start : portfolio_starts(problem))
        {
            InnerSolveResult r = ascend(problem, std::move(start), options);
            if (first || r.objective > best.objective)
                best = std::move(r);
            first = false;
        }
        return best;
    }

    CVec mrt_beam(const Scenario &scenario, int user_index, double rotation, double power)
    {
        const CVec h = user_channel(scenario, user_index, rotation);
        const double norm = h.norm();
        if (!(norm > 0.0))
            throw std::invalid_argument("mrt_beam: zero channel for user " + std::to_string(user_index));
        return std::sqrt(power) / norm * h;
    }

    std::vector<CVec> zf_beams(std::span<const CVec> channels, double power)
    {
        const int k = static_cast<int>(channels.size());
        if (k == 0)
            throw std::invalid_argument("zf_beams: no users");
        const int m = static_cast<int>(channels[0].size());
        if (k > m)
            throw SingularChannelError("zf_beams: more users than transmit antennas");

        CMat h(k, m);
        for (int u = 0; u < k; ++u)
            h.row(u) = channels[u].adjoint();

        const Eigen::JacobiSVD<CMat> svd(h);
        const auto &sv = svd.singularValues();
        if (!(sv.maxCoeff() > 0.0) || sv.minCoeff() <= 1e-10 * sv.maxCoeff())
            throw SingularChannelError("zf_beams: channel matrix is rank deficient");

        const CMat gram = h * h.adjoint();
        const CMat directions = h.adjoint() * gram.ldlt().solve(CMat::Identity(k, k));

        std::vector<CVec> beams(k);
        const double per_user = std::sqrt(power / k);
        for (int u = 0; u < k; ++u)
            beams[u] = per_user / directions.col(u).norm() * directions.col(u);
        return beams;
    }

    std::vector<CVec> zf_beams(const Scenario &scenario, double rotation, double power)
    {
        return zf_beams(user_channels(scenario, rotation), power);
    }

    BeamformingSolution sensing_optimal_covariance(const Scenario &scenario, double rotation, double power)
    {
        const CVec a = steering_vector(scenario.tx_geometry, effective_angle(scenario.target.nominal_angle, rotation));
        return BeamformingSolution({std::sqrt(power / a.size()) * a});
    }
}
