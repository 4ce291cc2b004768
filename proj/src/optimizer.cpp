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
#include "raisac/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <thread>

#include <spdlog/spdlog.h>

namespace raisac
{
    std::vector<double> rotation_grid(const Interval &region, int count)
    {
        if (count < 2)
            throw std::invalid_argument("rotation_grid: need at least 2 grid points");
        if (!(region.lo <= region.hi))
            throw std::invalid_argument("rotation_grid: need lo <= hi");
        std::vector<double> grid(static_cast<std::size_t>(count));
        const double span = region.hi - region.lo;
        for (int i = 0; i < count; ++i)
            grid[i] = region.lo + span * static_cast<double>(i) / (count - 1);
        grid.front() = region.lo;
        grid.back() = region.hi;
        if (region.contains(0.0))
        {
            auto nearest = std::min_element(grid.begin(), grid.end(),
                                             [](double a, double b) { return std::abs(a) < std::abs(b); });
            *nearest = 0.0;
        }
        return grid;
    }

    namespace
    {
        struct PointResult
        {
            std::optional<InnerResult> result;
        };

        PointResult evaluate(const InnerSolver &inner, double rotation, const std::vector<CVec> *warm)
        {
            try
            {
                return {inner(rotation, warm)};
            }
            catch (const std::exception &e)
            {
                spdlog::warn("rotation {:.6f}: inner solve failed: {}", rotation, e.what());
                return {std::nullopt};
            }
        }

        const std::vector<CVec> *beams_of(const PointResult &p) { return p.result ? &p.result->solution.beams() : nullptr; }

        std::size_t anchor_index(const std::vector<double> &grid)
        {
            return static_cast<std::size_t>(std::distance(
                grid.begin(), std::min_element(grid.begin(), grid.end(), [](double a, double b) { return std::abs(a) < std::abs(b); })));
        }

        void golden_refine(const InnerSolver &inner, double lo, double hi, double tolerance, RotationSearchResult &best)
        {
            constexpr double inv_phi = 0.6180339887498949;
            const std::vector<CVec> seed = best.best_solution.beams();
            auto value = [&](double x) {
                auto p = evaluate(inner, x, &seed);
                return p;
            };
            double a = lo, b = hi;
            double c = b - inv_phi * (b - a);
            double d = a + inv_phi * (b - a);
            auto fc = value(c), fd = value(d);
            auto score = [](const PointResult &p) { return p.result ? p.result->objective : -std::numeric_limits<double>::infinity(); };
            while (b - a > tolerance)
            {
                if (score(fc) >= score(fd))
                {
                    b = d;
                    d = c;
                    fd = std::move(fc);
                    c = b - inv_phi * (b - a);
                    fc = value(c);
                }
                else
                {
                    a = c;
                    c = d;
                    fc = std::move(fd);
                    d = a + inv_phi * (b - a);
                    fd = value(d);
                }
            }
            const bool left = score(fc) >= score(fd);
            const PointResult &winner = left ? fc : fd;
            if (winner.result && winner.result->objective > best.best_objective)
            {
                best.best_objective = winner.result->objective;
                best.best_rotation = left ? c : d;
                best.best_solution = winner.result->solution;
            }
        }
    }

    RotationSearchResult grid_search(const Interval &region, int grid_points, const InnerSolver &inner, const SearchOptions &search)
    {
        const std::vector<double> grid = rotation_grid(region, grid_points);
        const std::size_t n = grid.size();
        std::vector<PointResult> points(n);

        if (search.workers > 1)
        {
            std::atomic<std::size_t> next{0};
            auto work = [&] {
                for (std::size_t i = next++; i < n; i = next++)
                    points[i] = evaluate(inner, grid[i], nullptr);
            };
            std::vector<std::jthread> pool;
            const int threads = std::min<int>(search.workers, static_cast<int>(n));
            for (int t = 0; t < threads; ++t)
                pool.emplace_back(work);
        }
        else
        {
            const std::size_t anchor = anchor_index(grid);
            points[anchor] = evaluate(inner, grid[anchor], nullptr);
            for (std::size_t i = anchor + 1; i < n; ++i)
                points[i] = evaluate(inner, grid[i], search.warm_start ? beams_of(points[i - 1]) : nullptr);
            for (std::size_t i = anchor; i-- > 0;)
                points[i] = evaluate(inner, grid[i], search.warm_start ? beams_of(points[i + 1]) : nullptr);
        }

        RotationSearchResult out;
        out.profile.reserve(n);
        std::optional<std::size_t> best;
        for (std::size_t i = 0; i < n; ++i)
        {
            ProfilePoint p{grid[i], std::numeric_limits<double>::quiet_NaN(), true, false};
            if (points[i].result)
            {
                p.objective = points[i].result->objective;
                p.failed = false;
                p.converged = points[i].result->converged;
                if (!best || p.objective > out.profile[*best].objective)
                    best = i;
            }
            out.profile.push_back(p);
        }
        if (!best)
            throw std::runtime_error("grid_search: every grid point failed");

        out.best_rotation = grid[*best];
        out.best_objective = out.profile[*best].objective;
        out.best_solution = points[*best].result->solution;

        if (search.refine)
        {
            const double lo = grid[*best == 0 ? 0 : *best - 1];
            const double hi = grid[std::min(*best + 1, n - 1)];
            golden_refine(inner, lo, hi, search.refine_tolerance, out);
        }
        return out;
    }

    RotationSearchResult rotation_search(const Scenario &scenario, WeightPair weights, const SolverOptions &options, int grid_points,
                                         const SearchOptions &search)
    {
        scenario.validate();
        weights.validate();
        options.validate();
        auto inner = [&](double rotation, const std::vector<CVec> *warm) {
            auto r = fp_bcd_solve(scenario, rotation, weights, options, warm);
            if (!r.converged)
                spdlog::debug("rotation {:.6f}: BCD hit the iteration cap ({} iterations)", rotation, r.iterations);
            return InnerResult{std::move(r.solution), r.objective, r.converged};
        };
        return grid_search(scenario.rotation_region, grid_points, inner, search);
    }

    RotationSearchResult rotation_search_zf(const Scenario &scenario, WeightPair weights, int grid_points, const SearchOptions &search)
    {
        scenario.validate();
        weights.validate();
        auto inner = [&](double rotation, const std::vector<CVec> *) {
            const InnerProblem problem = InnerProblem::build(scenario, rotation, weights);
            auto beams = zf_beams(problem.channels, problem.power_budget);
            const double objective = problem.objective(beams);
            return InnerResult{BeamformingSolution(std::move(beams)), objective, true};
        };
        return grid_search(scenario.rotation_region, grid_points, inner, search);
    }

    double sensing_only_rotation(double theta, const Interval &region)
    {
        if (!(region.lo <= region.hi))
            throw std::invalid_argument("sensing_only_rotation: need lo <= hi");
        std::vector<double> candidates{region.lo, region.hi};
        // stationary points of cos^2(theta + phi): phi = n pi - theta
        const double first = std::ceil((region.lo + theta) / kPi);
        const double last = std::floor((region.hi + theta) / kPi);
        for (double n = first; n <= last; n += 1.0)
            candidates.push_back(region.clamp(n * kPi - theta));
        std::sort(candidates.begin(), candidates.end());

        double best = candidates.front();
        double best_value = -1.0;
        for (double phi : candidates)
        {
            const double c = std::cos(theta + phi);
            if (c * c > best_value)
            {
                best_value = c * c;
                best = phi;
            }
        }
        return best;
    }

    RotationSearchResult joint_solve(const Scenario &scenario, WeightPair weights, const SolverOptions &options, int grid_points,
                                     const SearchOptions &search)
    {
        return rotation_search(scenario, weights, options, grid_points, search);
    }
}
