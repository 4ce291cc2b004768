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
#include <doctest.h>

#include <cmath>
#include <mutex>

#include "raisac/optimizer.hpp"

using namespace raisac;

namespace
{
    const Interval kRegion{-kPi / 6, kPi / 6};

    InnerResult scalar_result(double value)
    {
        return {BeamformingSolution({CVec::Constant(2, cplx(value, 0.0))}), value, true};
    }

    Scenario two_path_user(double th0, double th1)
    {
        Scenario s;
        s.users = {{{1.0, th0}, {cplx(0.8, 0.3), th1}}};
        s.noise_powers = {1.0};
        s.target.nominal_angle = 0.3;
        return s;
    }
}

TEST_CASE("rotation grid")
{
    const auto g = rotation_grid(kRegion, 361);
    REQUIRE(g.size() == 361);
    CHECK(g.front() == kRegion.lo);
    CHECK(g.back() == kRegion.hi);
    CHECK(g[180] == 0.0);
    for (std::size_t i = 1; i < g.size(); ++i)
        CHECK(g[i] > g[i - 1]);

    // even count: the point nearest zero is forced to zero
    const auto e = rotation_grid(kRegion, 60);
    CHECK(std::count(e.begin(), e.end(), 0.0) == 1);
    CHECK(e.front() == kRegion.lo);
    CHECK(e.back() == kRegion.hi);

    // zero outside the region leaves the grid untouched
    const auto off = rotation_grid({0.1, 0.5}, 5);
    CHECK(off == std::vector<double>{0.1, 0.2, 0.30000000000000004, 0.4, 0.5});

    CHECK_THROWS_AS(rotation_grid(kRegion, 1), std::invalid_argument);
    CHECK_THROWS_AS(rotation_grid({0.5, 0.1}, 5), std::invalid_argument);
}

TEST_CASE("grid search: argmax, ties and profile")
{
    auto peak = [](double phi, const std::vector<CVec> *) { return scalar_result(-(phi - 0.2) * (phi - 0.2)); };
    const auto r = grid_search(kRegion, 361, peak);
    const double cell = (kRegion.hi - kRegion.lo) / 360;
    CHECK(std::abs(r.best_rotation - 0.2) <= cell / 2 + 1e-15);
    CHECK(r.profile.size() == 361);
    for (const auto &p : r.profile)
        CHECK(r.best_objective >= p.objective);
    CHECK(r.profile.front().rotation == kRegion.lo);
    CHECK(r.profile.back().rotation == kRegion.hi);

    auto flat = [](double, const std::vector<CVec> *) { return scalar_result(1.0); };
    CHECK(grid_search(kRegion, 11, flat).best_rotation == kRegion.lo);

    auto rising = [](double phi, const std::vector<CVec> *) { return scalar_result(phi); };
    const auto two = grid_search(kRegion, 2, rising);
    CHECK(two.best_rotation == kRegion.hi);
    CHECK(two.profile.size() == 2);
}

TEST_CASE("grid search: failed points are skipped, all failures throw")
{
    auto partly = [](double phi, const std::vector<CVec> *) {
        if (phi > 0.1)
            throw std::runtime_error("synthetic failure");
        return scalar_result(phi);
    };
    const auto r = grid_search(kRegion, 21, partly);
    CHECK(r.best_rotation <= 0.1);
    int failed = 0;
    for (const auto &p : r.profile)
        if (p.failed)
        {
            ++failed;
            CHECK(std::isnan(p.objective));
        }
    CHECK(failed > 0);

    auto never = [](double, const std::vector<CVec> *) -> InnerResult { throw std::runtime_error("no"); };
    CHECK_THROWS(grid_search(kRegion, 5, never));
}

TEST_CASE("grid search: warm starts walk outward from zero")
{
    std::vector<std::pair<double, bool>> calls;
    auto record = [&](double phi, const std::vector<CVec> *warm) {
        calls.emplace_back(phi, warm != nullptr);
        return scalar_result(phi);
    };
    (void)grid_search(kRegion, 7, record);
    REQUIRE(calls.size() == 7);
    CHECK(calls[0].first == 0.0);
    CHECK_FALSE(calls[0].second);
    for (std::size_t i = 1; i < calls.size(); ++i)
        CHECK(calls[i].second);

    calls.clear();
    SearchOptions cold;
    cold.warm_start = false;
    (void)grid_search(kRegion, 7, record, cold);
    for (const auto &c : calls)
        CHECK_FALSE(c.second);
}

TEST_CASE("grid search: concurrent evaluation matches serial for a stateless inner solver")
{
    std::mutex m;
    int count = 0;
    auto f = [&](double phi, const std::vector<CVec> *) {
        {
            std::lock_guard lock(m);
            ++count;
        }
        return scalar_result(std::sin(7 * phi) + 0.1 * phi);
    };
    SearchOptions par;
    par.workers = 3;
    const auto a = grid_search(kRegion, 101, f);
    const auto b = grid_search(kRegion, 101, f, par);
    CHECK(count == 202);
    CHECK(a.best_rotation == b.best_rotation);
    CHECK(a.best_objective == b.best_objective);
    for (std::size_t i = 0; i < a.profile.size(); ++i)
        CHECK(a.profile[i].objective == b.profile[i].objective);
}

TEST_CASE("grid search: golden-section refinement")
{
    auto peak = [](double phi, const std::vector<CVec> *) { return scalar_result(-(phi - 0.123456) * (phi - 0.123456)); };
    SearchOptions opt;
    opt.refine = true;
    opt.refine_tolerance = 1e-9;
    const auto r = grid_search(kRegion, 11, peak, opt);
    CHECK(std::abs(r.best_rotation - 0.123456) < 1e-8);
    CHECK(r.profile.size() == 11);
}

TEST_CASE("sensing-only rotation closed form")
{
    CHECK(sensing_only_rotation(kPi / 6, kRegion) == -kPi / 6);
    CHECK(sensing_only_rotation(kPi / 4, kRegion) == -kPi / 6);
    CHECK(sensing_only_rotation(-kPi / 4, kRegion) == kPi / 6);
    CHECK(sensing_only_rotation(0.0, kRegion) == 0.0);
    CHECK(sensing_only_rotation(0.1, kRegion) == doctest::Approx(-0.1).epsilon(1e-15));
    // pi - theta inside a wide region
    CHECK(sensing_only_rotation(2.9, {-1.0, 1.0}) == doctest::Approx(kPi - 2.9).epsilon(1e-14));
    CHECK_THROWS_AS(sensing_only_rotation(0.0, {1.0, -1.0}), std::invalid_argument);

    // 1e5-point grid oracle
    for (double theta : {-1.2, -0.7, -0.3, 0.05, 0.4, 0.9, 1.3})
        for (Interval region : {kRegion, Interval{-1.0, 0.2}, Interval{0.3, 2.5}})
        {
            const double phi = sensing_only_rotation(theta, region);
            CHECK(region.contains(phi));
            double best = 0.0;
            for (int i = 0; i < 100000; ++i)
            {
                const double x = region.lo + (region.hi - region.lo) * i / 99999.0;
                best = std::max(best, std::pow(std::cos(theta + x), 2));
            }
            CHECK(std::pow(std::cos(theta + phi), 2) >= best - 1e-10);
        }
}

TEST_CASE("rotation search: sensing only follows the closed form")
{
    Scenario s = two_path_user(0.1, -0.4);
    s.target.nominal_angle = kPi / 6;
    const auto r = rotation_search(s, {0.0, 1.0}, SolverOptions{}, 361);
    const double cell = (kRegion.hi - kRegion.lo) / 360;
    CHECK(std::abs(r.best_rotation - (-kPi / 6)) <= cell);
    CHECK(kRegion.contains(r.best_rotation));

    // CRB at the optimum matches the sensing-optimal covariance at the closed-form rotation within a grid cell
    for (double theta : {-0.8, -0.2, 0.35, 0.7})
    {
        s.target.nominal_angle = theta;
        const auto j = joint_solve(s, {0.0, 1.0}, SolverOptions{}, 361);
        const double phi = sensing_only_rotation(theta, s.rotation_region);
        const double crb = crb_closed(j.best_solution, s, j.best_rotation).value;
        const double lo = crb_closed(sensing_optimal_covariance(s, phi, 1.0), s, phi).value;
        double hi = lo;
        for (double d : {-cell, cell})
        {
            const double x = s.rotation_region.clamp(phi + d);
            hi = std::max(hi, crb_closed(sensing_optimal_covariance(s, x, 1.0), s, x).value);
        }
        CHECK(crb >= lo * (1 - 1e-6));
        CHECK(crb <= hi * (1 + 1e-3));
    }
}

TEST_CASE("rotation search: two-path user gains from rotation")
{
    for (auto [th0, th1] : {std::pair{0.3, -0.2}, std::pair{0.6, 0.5}, std::pair{-0.9, 0.1}})
    {
        const Scenario s = two_path_user(th0, th1);
        const auto r = rotation_search(s, {1.0, 0.0}, SolverOptions{}, 181);
        const double fixed = fp_bcd_solve(s, 0.0, {1.0, 0.0}, SolverOptions{}).objective;
        CHECK(r.best_objective >= fixed);
        const auto opt = max_rotation_gain(th0, th1, 16);
        REQUIRE(opt.has_value());
        if (s.rotation_region.contains(opt->rotation))
            CHECK(r.best_objective > fixed);
    }
}

TEST_CASE("joint solve: single LoS path rate is rotation invariant")
{
    Scenario s;
    s.users = {{{std::polar(0.7, 1.0), 0.4}}};
    s.noise_powers = {0.5};
    const auto r = joint_solve(s, {1.0, 0.0}, SolverOptions{}, 61);
    const double expect = std::log2(1 + 1.0 * 16 * 0.49 / 0.5);
    for (const auto &p : r.profile)
        CHECK(p.objective == doctest::Approx(expect).epsilon(1e-10));
}

TEST_CASE("joint solve dominates the fixed array exactly")
{
    const ScenarioDistribution dist;
    for (int seed = 0; seed < 6; ++seed)
        for (double w1 : {0.0, 0.3, 0.7, 1.0})
        {
            const Scenario s = draw_scenario(dist, 900 + seed);
            const WeightPair w = WeightPair::from_comm(w1);
            const auto r = joint_solve(s, w, SolverOptions{}, 61);
            const auto fixed = fp_bcd_solve(s, 0.0, w, SolverOptions{});
            CHECK(r.best_objective >= fixed.objective);
            const auto zero = std::find_if(r.profile.begin(), r.profile.end(), [](const ProfilePoint &p) { return p.rotation == 0.0; });
            REQUIRE(zero != r.profile.end());
            CHECK(zero->objective == fixed.objective);
        }
}

TEST_CASE("ZF rotation search evaluates the weighted objective with ZF beams")
{
    const Scenario s = draw_scenario(ScenarioDistribution{}, 77);
    const WeightPair w{0.6, 0.4};
    const auto r = rotation_search_zf(s, w, 31);
    for (const auto &p : r.profile)
    {
        const auto prob = InnerProblem::build(s, p.rotation, w);
        CHECK(p.objective == doctest::Approx(prob.objective(zf_beams(s, p.rotation, 1.0))).epsilon(1e-13));
    }
    CHECK(r.best_solution.num_beams() == 4);

    // more users than antennas: every point fails
    ScenarioDistribution crowded;
    crowded.tx_elements = 2;
    crowded.num_users = 3;
    CHECK_THROWS(rotation_search_zf(draw_scenario(crowded, 1), w, 5));
}
