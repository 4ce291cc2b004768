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
#ifndef RAISAC_OPTIMIZER_HPP
#define RAISAC_OPTIMIZER_HPP

#include <functional>
#include <vector>

#include "raisac/solver.hpp"

namespace raisac
{
    struct ProfilePoint
    {
        double rotation = 0.0;
        double objective = 0.0;
        bool failed = false;    // inner solve threw; excluded from the argmax
        bool converged = true;
    };

    struct RotationSearchResult
    {
        double best_rotation = 0.0;
        double best_objective = 0.0;
        BeamformingSolution best_solution;
        std::vector<ProfilePoint> profile; // ascending in rotation
    };

    struct SearchOptions
    {
        // Each grid point starts from the neighbouring point's beams. The sweep starts cold at the
        // grid point nearest zero and walks outward, so the zero-rotation point always matches a
        // cold fixed-rotation solve.
        bool warm_start = true;
        int workers = 1;        // > 1 evaluates grid points concurrently and disables warm starts
        bool refine = false;    // golden-section refinement around the best grid cell
        double refine_tolerance = 1e-6;
    };

    struct InnerResult
    {
        BeamformingSolution solution;
        double objective = 0.0;
        bool converged = true;
    };

    // Inner solver at one rotation; `warm` is null for a cold start.
    using InnerSolver = std::function<InnerResult(double rotation, const std::vector<CVec> *warm)>;

    // `count` uniformly spaced points over [lo, hi] with both endpoints exact; when zero lies inside
    // the interval the nearest point is replaced by exactly 0.
    std::vector<double> rotation_grid(const Interval &region, int count);

    RotationSearchResult grid_search(const Interval &region, int grid_points, const InnerSolver &inner, const SearchOptions &search = {});

    // Exhaustive search of g(phi) over the scenario's rotation region with the FP-BCD inner solver.
    RotationSearchResult rotation_search(const Scenario &scenario, WeightPair weights, const SolverOptions &options, int grid_points,
                                         const SearchOptions &search = {});

    // Same search with zero-forcing beams as the inner design.
    RotationSearchResult rotation_search_zf(const Scenario &scenario, WeightPair weights, int grid_points, const SearchOptions &search = {});

    // argmax of cos^2(theta + phi) over the region, in closed form. Ties go to the smaller phi.
    double sensing_only_rotation(double theta, const Interval &region);

    inline constexpr int kDefaultGridPoints = 361;

    // Full pipeline over the scenario's rotation region. Cost is of order
    // grid_points * bcd_iterations * K * M_t^3.
    RotationSearchResult joint_solve(const Scenario &scenario, WeightPair weights, const SolverOptions &options,
                                     int grid_points = kDefaultGridPoints, const SearchOptions &search = {});
}

#endif
