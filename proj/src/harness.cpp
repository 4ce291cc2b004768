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
#include "raisac/harness.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "raisac/random.hpp"
#include "raisac/serialization.hpp"

namespace raisac
{
    std::string_view scheme_name(Scheme scheme)
    {
        switch (scheme)
        {
        case Scheme::Proposed:
            return "proposed";
        case Scheme::BeamformingOnly:
            return "beamforming-only";
        case Scheme::RotationOnlyZf:
            return "rotation-only-zf";
        }
        return "unknown";
    }

    Scheme parse_scheme(std::string_view name)
    {
        for (Scheme s : {Scheme::Proposed, Scheme::BeamformingOnly, Scheme::RotationOnlyZf})
            if (scheme_name(s) == name)
                return s;
        throw std::invalid_argument("unknown scheme \"" + std::string(name) +
                                    "\" (expected proposed, beamforming-only or rotation-only-zf)");
    }

    std::vector<WeightPair> default_weight_grid()
    {
        std::vector<WeightPair> grid;
        for (int i = 0; i <= 10; ++i)
            grid.push_back({i / 10.0, (10 - i) / 10.0});
        return grid;
    }

    void ExperimentConfig::validate() const
    {
        try
        {
            distribution.validate();
            options.validate();
        }
        catch (const std::invalid_argument &e)
        {
            throw ConfigError(e.what());
        }
        if (schemes.empty())
            throw ConfigError("schemes: at least one scheme required");
        if (weight_grid.empty())
            throw ConfigError("weight_grid: at least one weight pair required");
        for (std::size_t i = 0; i < weight_grid.size(); ++i)
        {
            try
            {
                weight_grid[i].validate();
            }
            catch (const std::invalid_argument &e)
            {
                throw ConfigError("weight_grid[" + std::to_string(i) + "]: " + e.what());
            }
        }
        if (monte_carlo_runs < 1)
            throw ConfigError("monte_carlo_runs: must be >= 1");
        if (grid_points < 2)
            throw ConfigError("grid_points: must be >= 2");
        if (output_path.empty())
            throw ConfigError("output_path: must not be empty");
        if (workers < 0)
            throw ConfigError("workers: must be >= 0");
        if (!(omega1 >= 0.0 && omega1 <= 1.0))
            throw ConfigError("omega1: must lie in [0, 1]");
        if (pattern_users < 1)
            throw ConfigError("pattern_users: must be >= 1");
        if (pattern_nlos_paths < 0)
            throw ConfigError("pattern_nlos_paths: must be >= 0");
        if (pattern_points < 2)
            throw ConfigError("pattern_points: must be >= 2");
    }

    int ExperimentConfig::resolved_workers() const
    {
        if (workers > 0)
            return workers;
        const unsigned hw = std::thread::hardware_concurrency();
        return hw == 0 ? 1 : static_cast<int>(hw);
    }

    SchemeOutcome evaluate_scheme(const Scenario &scenario, Scheme scheme, WeightPair weights, const ExperimentConfig &config)
    {
        SchemeOutcome out;
        const SearchOptions serial{};
        switch (scheme)
        {
        case Scheme::Proposed:
        {
            auto r = joint_solve(scenario, weights, config.options, config.grid_points, serial);
            out.rotation = r.best_rotation;
            out.objective = r.best_objective;
            out.solution = std::move(r.best_solution);
            for (const auto &p : r.profile)
                out.converged = out.converged && (p.failed || p.converged);
            break;
        }
        case Scheme::BeamformingOnly:
        {
            auto r = fp_bcd_solve(scenario, 0.0, weights, config.options);
            out.rotation = 0.0;
            out.objective = r.objective;
            out.solution = std::move(r.solution);
            out.converged = r.converged;
            break;
        }
        case Scheme::RotationOnlyZf:
        {
            auto r = rotation_search_zf(scenario, weights, config.grid_points, serial);
            out.rotation = r.best_rotation;
            out.objective = r.best_objective;
            out.solution = std::move(r.best_solution);
            break;
        }
        }
        out.sum_rate = sum_rate(scenario, out.solution.beams(), out.rotation);
        out.crb = crb_closed(out.solution, scenario, out.rotation);
        return out;
    }

    std::uint64_t realization_seed(std::uint64_t seed, int index) { return derive_seed(seed, static_cast<std::uint64_t>(index)); }

    MetricSummary summarize(std::string name, const std::vector<double> &samples)
    {
        MetricSummary s;
        s.name = std::move(name);
        double sum = 0.0;
        for (double x : samples)
            if (std::isfinite(x))
            {
                sum += x;
                ++s.count;
            }
        if (s.count == 0)
        {
            s.mean = std::numeric_limits<double>::quiet_NaN();
            s.std_error = std::numeric_limits<double>::quiet_NaN();
            return s;
        }
        s.mean = sum / s.count;
        if (s.count > 1)
        {
            double ss = 0.0;
            for (double x : samples)
                if (std::isfinite(x))
                    ss += (x - s.mean) * (x - s.mean);
            s.std_error = std::sqrt(ss / (s.count - 1) / s.count);
        }
        return s;
    }

    std::vector<MetricSummary> run_monte_carlo(int runs, std::uint64_t seed, int workers, const std::vector<std::string> &names,
                                               const MetricClosure &metrics)
    {
        if (runs < 1)
            throw std::invalid_argument("run_monte_carlo: need at least one run");
        const auto samples = map_realizations<std::vector<double>>(runs, seed, workers, metrics);
        std::vector<MetricSummary> out;
        for (std::size_t m = 0; m < names.size(); ++m)
        {
            std::vector<double> column;
            column.reserve(samples.size());
            for (const auto &row : samples)
            {
                if (row.size() != names.size())
                    throw std::runtime_error("run_monte_carlo: metric closure returned the wrong number of values");
                column.push_back(row[m]);
            }
            out.push_back(summarize(names[m], column));
        }
        return out;
    }

    TradeoffResult run_tradeoff_sweep(const ExperimentConfig &config)
    {
        config.validate();
        std::function<std::vector<RealizationRecord>(int, std::uint64_t)> one = [&](int index, std::uint64_t seed) {
            const Scenario scenario = draw_scenario(config.distribution, seed);
            std::vector<RealizationRecord> rows;
            for (const auto &w : config.weight_grid)
                for (Scheme s : config.schemes)
                {
                    const SchemeOutcome o = evaluate_scheme(scenario, s, w, config);
                    rows.push_back({index, seed, s, w.comm_weight, o.sum_rate, o.crb.value, o.crb.degenerate, o.rotation, o.objective,
                                    o.converged});
                }
            spdlog::info("realization {} done", index);
            return rows;
        };
        const auto per_run = map_realizations(config.monte_carlo_runs, config.seed, config.resolved_workers(), one);

        TradeoffResult result;
        for (const auto &rows : per_run)
            result.realizations.insert(result.realizations.end(), rows.begin(), rows.end());

        const std::size_t per_realization = config.weight_grid.size() * config.schemes.size();
        for (std::size_t slot = 0; slot < per_realization; ++slot)
        {
            TradeoffRecord rec;
            rec.scheme = config.schemes[slot % config.schemes.size()];
            rec.comm_weight = config.weight_grid[slot / config.schemes.size()].comm_weight;
            std::vector<double> rate, crb, log_crb, phi;
            for (const auto &rows : per_run)
            {
                const RealizationRecord &r = rows[slot];
                rate.push_back(r.sum_rate);
                phi.push_back(r.rotation);
                if (r.degenerate)
                {
                    ++rec.degenerate;
                    continue;
                }
                crb.push_back(r.crb);
                log_crb.push_back(std::log10(r.crb));
            }
            rec.mean_sum_rate = summarize("sum_rate", rate).mean;
            rec.mean_rotation = summarize("phi", phi).mean;
            rec.mean_crb = summarize("crb", crb).mean;
            rec.mean_log10_crb = summarize("log10_crb", log_crb).mean;
            rec.runs = static_cast<int>(crb.size());
            result.records.push_back(rec);
        }
        return result;
    }

    namespace
    {
        std::string format_double(double x)
        {
            std::ostringstream ss;
            ss.imbue(std::locale::classic());
            ss.precision(17);
            ss << x;
            return ss.str();
        }

        constexpr const char *kCsvHeader = "scheme,omega1,mean_sum_rate_bps_hz,mean_crb_rad2,mean_log10_crb,mean_phi_rad,runs";
    }

    void write_tradeoff_csv(const std::string &path, const std::vector<TradeoffRecord> &records)
    {
        std::string text = std::string(kCsvHeader) + "\n";
        for (const auto &r : records)
        {
            text += std::string(scheme_name(r.scheme)) + "," + format_double(r.comm_weight) + "," + format_double(r.mean_sum_rate) + "," +
                    format_double(r.mean_crb) + "," + format_double(r.mean_log10_crb) + "," + format_double(r.mean_rotation) + "," +
                    std::to_string(r.runs) + "\n";
        }
        write_text_file(path, text);
    }

    std::vector<TradeoffRecord> read_tradeoff_csv(const std::string &path)
    {
        std::istringstream in(read_text_file(path));
        std::string line;
        if (!std::getline(in, line) || line != kCsvHeader)
            throw std::runtime_error(path + ": missing or unexpected CSV header");
        std::vector<TradeoffRecord> out;
        int line_no = 1;
        while (std::getline(in, line))
        {
            ++line_no;
            if (line.empty())
                continue;
            std::vector<std::string> cells;
            std::stringstream ls(line);
            for (std::string cell; std::getline(ls, cell, ',');)
                cells.push_back(cell);
            if (cells.size() != 7)
                throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected 7 columns");
            TradeoffRecord r;
            r.scheme = parse_scheme(cells[0]);
            r.comm_weight = std::stod(cells[1]);
            r.mean_sum_rate = std::stod(cells[2]);
            r.mean_crb = std::stod(cells[3]);
            r.mean_log10_crb = std::stod(cells[4]);
            r.mean_rotation = std::stod(cells[5]);
            r.runs = std::stoi(cells[6]);
            out.push_back(r);
        }
        return out;
    }

    std::vector<WeightPair> default_pattern_weights() { return {{0.0, 1.0}, {1.0, 0.0}, {0.5, 0.5}}; }

    BeampatternResult run_beampattern(const ExperimentConfig &config, const std::vector<WeightPair> &weights, std::uint64_t seed)
    {
        config.validate();
        ScenarioDistribution dist = config.distribution;
        dist.num_users = config.pattern_users;
        dist.num_nlos_paths = config.pattern_nlos_paths;

        BeampatternResult out;
        out.scenario = draw_scenario(dist, seed);
        out.angle_grid.resize(static_cast<std::size_t>(config.pattern_points));
        for (int i = 0; i < config.pattern_points; ++i)
            out.angle_grid[i] = -kPi / 3.0 + (2.0 * kPi / 3.0) * static_cast<double>(i) / (config.pattern_points - 1);

        for (const auto &w : weights)
        {
            const auto r = joint_solve(out.scenario, w, config.options, config.grid_points);
            PatternCase pc;
            pc.label = w.comm_weight == 0.0 ? "sensing-only" : (w.comm_weight == 1.0 ? "communication-only" : "joint");
            pc.weights = w;
            pc.rotation = r.best_rotation;
            pc.target_effective_angle = out.scenario.target.nominal_angle + r.best_rotation;
            for (const auto &paths : out.scenario.users)
                pc.user_los_effective_angles.push_back(paths.front().nominal_angle + r.best_rotation);
            // grid is in effective angle, so no further rotation is applied
            pc.pattern = beam_pattern(r.best_solution, out.scenario, out.angle_grid, 0.0);
            const CVec a = steering_vector(out.scenario.tx_geometry, EffectiveAngle{pc.target_effective_angle});
            pc.target_gain = (a.adjoint() * r.best_solution.covariance() * a)(0, 0).real();
            out.cases.push_back(std::move(pc));
        }
        return out;
    }

    void configure_logging_from_env()
    {
        static std::once_flag once;
        std::call_once(once, [] {
            auto logger = spdlog::stderr_color_mt("raisac");
            spdlog::set_default_logger(logger);
        });
        spdlog::level::level_enum level = spdlog::level::warn;
        if (const char *env = std::getenv("RA_ISAC_LOG"))
        {
            const std::string v(env);
            if (v == "error")
                level = spdlog::level::err;
            else if (v == "warn")
                level = spdlog::level::warn;
            else if (v == "info")
                level = spdlog::level::info;
            else if (v == "debug")
                level = spdlog::level::debug;
        }
        spdlog::set_level(level);
    }
}
