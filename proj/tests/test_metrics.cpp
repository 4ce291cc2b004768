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

#include "raisac/metrics.hpp"
#include "raisac/random.hpp"

using namespace raisac;

namespace
{
    Scenario sensing_scenario(int mt, int mr, double theta)
    {
        Scenario s;
        s.tx_geometry = ArrayGeometry(mt);
        s.rx_geometry = ArrayGeometry(mr);
        s.users = {{{1.0, 0.0}}};
        s.noise_powers = {1.0};
        s.target = {theta, 0.1};
        return s;
    }

    CMat random_psd(RandomStream &rng, int m, double trace)
    {
        CMat g(m, m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                g(i, j) = rng.complex_normal(1.0);
        CMat w = g * g.adjoint();
        return w * (trace / w.trace().real());
    }

    std::vector<CVec> random_beams(RandomStream &rng, int k, int m)
    {
        std::vector<CVec> beams(k, CVec(m));
        for (auto &w : beams)
            for (int i = 0; i < m; ++i)
                w[i] = rng.complex_normal(0.1);
        return beams;
    }

    // Correlation straight from the steering vectors.
    double literal_corr(double x, double y, int m)
    {
        const ArrayGeometry g(m);
        return std::abs(steering_vector(g, EffectiveAngle{x}).dot(steering_vector(g, EffectiveAngle{y})));
    }
}

TEST_CASE("solution covariance and power")
{
    RandomStream rng(1, 0);
    const auto beams = random_beams(rng, 3, 5);
    const BeamformingSolution sol(beams);
    CMat w = CMat::Zero(5, 5);
    double p = 0.0;
    for (const auto &b : beams)
    {
        w += b * b.adjoint();
        p += b.squaredNorm();
    }
    CHECK((sol.covariance() - w).norm() < 1e-15);
    CHECK(sol.total_power() == doctest::Approx(p).epsilon(1e-14));
    CHECK(sol.num_beams() == 3);
    CHECK(sol.num_elements() == 5);
    CHECK_THROWS_AS(BeamformingSolution(std::vector<CVec>{}), std::invalid_argument);
}

TEST_CASE("weight pairs")
{
    CHECK(WeightPair::from_comm(0.3).sense_weight == doctest::Approx(0.7));
    CHECK_THROWS_AS(WeightPair::from_comm(1.2), std::invalid_argument);
    CHECK_THROWS_AS(WeightPair::from_comm(-0.1), std::invalid_argument);
    CHECK_THROWS_AS((WeightPair{0.5, 0.6}.validate()), std::invalid_argument);
    CHECK_NOTHROW((WeightPair{0.1, 0.9}.validate()));
}

TEST_CASE("sinr examples")
{
    const std::vector<CVec> h{CVec::Ones(4)};
    const std::vector<CVec> w{CVec::Ones(4) / 2.0};
    const std::vector<double> noise{1.0};
    CHECK(sinr(h, w, noise, 0) == doctest::Approx(4.0).epsilon(1e-15));

    CVec orth(4);
    orth << 1, -1, 1, -1;
    const std::vector<CVec> wo{orth};
    CHECK(sinr(h, wo, noise, 0) == 0.0);
    CHECK_THROWS_AS(sinr(h, w, noise, 1), std::out_of_range);

    RandomStream rng(2, 0);
    const auto hs = random_beams(rng, 2, 6);
    const auto ws = random_beams(rng, 2, 6);
    const std::vector<double> n2{0.3, 0.7};
    for (int k = 0; k < 2; ++k)
    {
        cplx sig = 0, itf = 0;
        for (int i = 0; i < 6; ++i)
        {
            sig += std::conj(hs[k][i]) * ws[k][i];
            itf += std::conj(hs[k][i]) * ws[1 - k][i];
        }
        CHECK(sinr(hs, ws, n2, k) == doctest::Approx(std::norm(sig) / (std::norm(itf) + n2[k])).epsilon(1e-13));
    }
}

TEST_CASE("sum rate")
{
    const std::vector<CVec> h{CVec::Ones(4)};
    const std::vector<double> noise{1.0};
    CHECK(sum_rate(h, std::vector<CVec>{CVec::Zero(4)}, noise) == 0.0);
    // SINR 3
    const std::vector<CVec> w{std::sqrt(3.0 / 4.0) * CVec::Ones(4) / 2.0};
    CHECK(sum_rate(h, w, noise) == doctest::Approx(2.0).epsilon(1e-14));

    RandomStream rng(3, 0);
    Scenario s = sensing_scenario(16, 16, 0.2);
    s.users.clear();
    for (int k = 0; k < 4; ++k)
        s.users.push_back({{std::polar(1.0, rng.uniform(0, 6)), rng.uniform(-1, 1)}, {rng.complex_normal(1.0), rng.uniform(-1, 1)}});
    s.noise_powers.assign(4, 1.0);
    const auto beams = random_beams(rng, 4, 16);
    double expect = 0.0;
    for (int k = 0; k < 4; ++k)
        expect += std::log2(1.0 + sinr(s, beams, k, 0.1));
    CHECK(sum_rate(s, beams, 0.1) == doctest::Approx(expect).epsilon(1e-14));

    // invariant under per-beam phases
    auto rotated = beams;
    for (int k = 0; k < 4; ++k)
        rotated[k] *= std::polar(1.0, 0.7 * k + 0.1);
    CHECK(sum_rate(s, rotated, 0.1) == doctest::Approx(sum_rate(s, beams, 0.1)).epsilon(1e-13));
}

TEST_CASE("CRB examples")
{
    Scenario s = sensing_scenario(16, 16, 0.0);
    const BeamformingSolution matched({std::sqrt(1.0 / 16) * steering_vector(s.tx_geometry, EffectiveAngle{0.0})});
    const double chi = 3.0 * 15.0 / (2 * kPi * kPi * 100 * 0.1 * 16 * 17 * 7.5 * 7.5);
    CHECK(crb_chi(s) == doctest::Approx(chi).epsilon(1e-15));
    CHECK(crb_chi(s) == doctest::Approx(1.49e-5).epsilon(0.001));
    CHECK(crb_direct(matched, s, 0.0).value == doctest::Approx(chi / 16).epsilon(1e-14));
    CHECK(crb_closed(matched, s, 0.0).value == doctest::Approx(chi / 16).epsilon(1e-14));

    // endfire is degenerate for both forms
    s.target.nominal_angle = kPi / 2;
    const CrbValue d1 = crb_direct(matched, s, 0.0), d2 = crb_closed(matched, s, 0.0);
    CHECK(d1.degenerate);
    CHECK(d2.degenerate);
    CHECK(std::isinf(d1.value));
    CHECK(std::isinf(d2.value));
    // zero illumination
    s.target.nominal_angle = 0.2;
    CHECK(crb_closed(CMat::Zero(16, 16), s, 0.0).degenerate);
    CHECK(crb_direct(CMat::Zero(16, 16), s, 0.0).degenerate);

    // doubling T halves the CRB
    const double base = crb_closed(matched, s, 0.1).value;
    s.snapshots *= 2;
    CHECK(crb_closed(matched, s, 0.1).value == doctest::Approx(base / 2).epsilon(1e-14));
}

TEST_CASE("closed form equals direct CRB on random draws")
{
    RandomStream rng(4, 0);
    for (int trial = 0; trial < 200; ++trial)
    {
        const int mt = 2 + static_cast<int>(rng.uniform() * 20), mr = 2 + static_cast<int>(rng.uniform() * 20);
        Scenario s = sensing_scenario(mt, mr, rng.uniform(-1.4, 1.4));
        const CMat w = random_psd(rng, mt, rng.uniform(0.1, 3.0));
        const double phi = rng.uniform(-0.1, 0.1);
        const double a = crb_closed(w, s, phi).value, b = crb_direct(w, s, phi).value;
        CHECK(std::abs(a - b) < 1e-10 * b);
    }
}

TEST_CASE("CRB scaling with aperture, angle and receive size")
{
    Scenario s = sensing_scenario(8, 16, 0.0);
    const CMat w = CMat::Identity(8, 8) / 8.0;
    const double at0 = crb_closed(w, s, 0.0).value;
    // cos^2 scaling at a fixed transmit projection (identity W gives a^H W a = 1 everywhere)
    for (double th : {0.3, 0.8, 1.2})
    {
        s.target.nominal_angle = th;
        const double v = crb_closed(w, s, 0.0).value;
        CHECK(v * std::cos(th) * std::cos(th) == doctest::Approx(at0).epsilon(1e-13));
    }
    // strictly decreasing in |cos|
    double prev = 0.0;
    for (double th = 1.5; th >= 0.0; th -= 0.1)
    {
        s.target.nominal_angle = th;
        const double v = crb_closed(w, s, 0.0).value;
        if (prev > 0.0)
            CHECK(v < prev);
        prev = v;
    }
    // halving the equivalent aperture quadruples the CRB
    s.target.nominal_angle = 0.0;
    const double full = crb_closed(w, s, 0.0).value;
    s.target.nominal_angle = kPi / 3; // cos = 1/2
    CHECK(crb_closed(w, s, 0.0).value == doctest::Approx(4 * full).epsilon(1e-13));
    CHECK(equivalent_aperture(kPi / 3, 0.0, 7.5) == doctest::Approx(3.75).epsilon(1e-14));

    // M_r -> 2 M_r at fixed spacing: chi ratio (M-1)/(M(M+1)D^2) tends to 1/8
    Scenario big = s;
    big.rx_geometry = ArrayGeometry(256);
    Scenario bigger = s;
    bigger.rx_geometry = ArrayGeometry(512);
    const double ratio = crb_chi(big) / crb_chi(bigger);
    const double exact = (255.0 / (256 * 257 * 255.0 * 255.0)) / (511.0 / (512 * 513 * 511.0 * 511.0)) * 0.25 * 4.0;
    CHECK(ratio == doctest::Approx(exact).epsilon(1e-12));
    CHECK(ratio == doctest::Approx(8.0).epsilon(0.01));
}

TEST_CASE("sensing objective")
{
    Scenario s = sensing_scenario(16, 16, 0.4);
    CHECK(sensing_objective(CMat::Zero(16, 16), s, 0.0) == 0.0);
    const double phi = -0.1;
    const CVec a = steering_vector(s.tx_geometry, EffectiveAngle{0.3});
    const CMat w = (2.0 / 16) * a * a.adjoint();
    CHECK(sensing_objective(w, s, phi) == doctest::Approx(2.0 * 16 * std::cos(0.3) * std::cos(0.3)).epsilon(1e-13));

    RandomStream rng(5, 0);
    const CMat r = random_psd(rng, 16, 1.0);
    cplx q = 0;
    for (int i = 0; i < 16; ++i)
        for (int j = 0; j < 16; ++j)
            q += std::conj(a[i]) * r(i, j) * a[j];
    CHECK(sensing_objective(r, s, phi) == doctest::Approx(std::cos(0.3) * std::cos(0.3) * q.real()).epsilon(1e-12));

    // unitary mixing of beams preserves W and the objective
    const auto beams = random_beams(rng, 2, 16);
    const double t = 0.6;
    const cplx e = std::polar(1.0, 0.9);
    std::vector<CVec> mixed{std::cos(t) * beams[0] + std::sin(t) * e * beams[1], -std::sin(t) * std::conj(e) * beams[0] + std::cos(t) * beams[1]};
    CHECK(sensing_objective(BeamformingSolution(mixed), s, phi) ==
          doctest::Approx(sensing_objective(BeamformingSolution(beams), s, phi)).epsilon(1e-12));
}

TEST_CASE("beam pattern")
{
    const ArrayGeometry tx(16);
    std::vector<double> grid;
    for (int i = 0; i <= 240; ++i)
        grid.push_back(-kPi / 3 + i * (2 * kPi / 3) / 240);
    const double t0 = 0.2345;
    const CVec a = steering_vector(tx, EffectiveAngle{t0});
    const auto p = beam_pattern(CMat(a * a.adjoint() / 16.0), tx, grid, 0.0);
    const auto arg = std::max_element(p.gains.begin(), p.gains.end()) - p.gains.begin();
    int nearest = 0;
    for (int i = 0; i < 241; ++i)
        if (std::abs(grid[i] - t0) < std::abs(grid[nearest] - t0))
            nearest = i;
    CHECK(arg == nearest);
    CHECK(p.gains[arg] == 1.0);
    for (double g : p.gains)
    {
        CHECK(g >= 0.0);
        CHECK(g <= 1.0);
    }
    CHECK(!p.all_zero);

    const auto flat = beam_pattern(CMat(CMat::Identity(16, 16) / 16.0), tx, grid, 0.0);
    for (double g : flat.gains)
        CHECK(g == doctest::Approx(1.0).epsilon(1e-14));

    const auto zero = beam_pattern(CMat(CMat::Zero(16, 16)), tx, grid, 0.0);
    CHECK(zero.all_zero);
    for (double g : zero.gains)
        CHECK(g == 0.0);

    // rotation shifts the pattern in nominal angle
    const auto shifted = beam_pattern(CMat(a * a.adjoint() / 16.0), tx, grid, 0.1);
    const auto arg2 = std::max_element(shifted.gains.begin(), shifted.gains.end()) - shifted.gains.begin();
    CHECK(std::abs(grid[arg2] + 0.1 - t0) <= (grid[1] - grid[0]));
}

TEST_CASE("array correlation and rotation gain")
{
    RandomStream rng(6, 0);
    for (int i = 0; i < 10000; ++i)
    {
        const double x = rng.uniform(-1.5, 1.5), y = rng.uniform(-1.5, 1.5), phi = rng.uniform(-0.6, 0.6);
        const int m = 2 + static_cast<int>(rng.uniform() * 15);
        const double fixed = literal_corr(x, y, m);
        CHECK(array_correlation(x, y, m) == doctest::Approx(fixed).epsilon(1e-9).scale(0.0));
        if (fixed > 1e-6)
        {
            const auto g = rotation_gain(x, y, phi, m);
            REQUIRE(g.has_value());
            CHECK(std::abs(*g - literal_corr(x + phi, y + phi, m) / fixed) <= 1e-9 * *g);
        }
    }
    CHECK(*rotation_gain(0.3, 0.3, 0.4, 16) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(*rotation_gain(0.3, -0.5, 0.0, 16) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("rotation gain at a Dirichlet null is unbounded")
{
    // sin(y) - sin(x) = 1/(M s) puts the fixed correlation on the first null
    const int m = 8;
    const double x = 0.0, y = std::asin(2.0 / m);
    CHECK(literal_corr(x, y, m) < 1e-12);
    CHECK_FALSE(rotation_gain(x, y, 0.2, m).has_value());
    CHECK_FALSE(max_rotation_gain(x, y, m).has_value());
}

TEST_CASE("max rotation gain")
{
    // M = 4 with sin(zeta1) cos(zeta2) = 0.1
    const double z2 = 0.3, z1 = std::asin(0.1 / std::cos(z2));
    const auto r = max_rotation_gain(z2 + z1, z2 - z1, 4);
    REQUIRE(r.has_value());
    CHECK(r->gain == doctest::Approx(4 * std::sin(0.1 * kPi) / std::sin(0.4 * kPi)).epsilon(1e-12));
    CHECK(r->gain == doctest::Approx(1.2996).epsilon(1e-4));
    CHECK(r->rotation == doctest::Approx(kPi / 2 - z2).epsilon(1e-14));

    CHECK(max_rotation_gain(0.4, 0.4, 16)->gain == doctest::Approx(1.0).epsilon(1e-14));

    RandomStream rng(7, 0);
    for (int i = 0; i < 2000; ++i)
    {
        const double a = rng.uniform(-1.5, 1.5), b = rng.uniform(-1.5, 1.5);
        const int m = 2 + static_cast<int>(rng.uniform() * 31);
        const auto opt = max_rotation_gain(a, b, m);
        if (!opt)
            continue;
        // coherent sum at the optimum and the gain it implies
        CHECK(literal_corr(a + opt->rotation, b + opt->rotation, m) == doctest::Approx(m).epsilon(1e-9));
        CHECK(opt->gain == doctest::Approx(m / literal_corr(a, b, m)).epsilon(1e-9));
        if (a != b)
            CHECK(opt->gain > 1.0);
        // smallest |phi*| among pi/2 + n pi - zeta2
        const double z = 0.5 * (a + b);
        CHECK(std::abs(opt->rotation) <= std::abs(kPi / 2 - z) + 1e-15);
        CHECK(std::abs(opt->rotation) <= std::abs(-kPi / 2 - z) + 1e-15);
    }
}

TEST_CASE("equivalent aperture")
{
    CHECK(equivalent_aperture(kPi / 4, -kPi / 4, 7.5) == doctest::Approx(7.5).epsilon(1e-15));
    CHECK(std::abs(equivalent_aperture(kPi / 4, kPi / 4, 7.5)) < 1e-15);
}
