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
#ifndef RAISAC_HARNESS_HPP
#define RAISAC_HARNESS_HPP

#include <atomic>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "raisac/optimizer.hpp"

namespace raisac
{
    enum class Scheme
    {
        Proposed,        // joint rotation search with the FP-BCD inner solver
        BeamformingOnly, // FP-BCD at zero rotation
        RotationOnlyZf,  // rotation search with zero-forcing beams
    };

    std::string_view scheme_name(Scheme scheme);
    Scheme parse_scheme(std::string_view name); // throws std::invalid_argument

    std::vector<WeightPair> default_weight_grid(); // comm weight 0, 0.1, ..., 1

    struct ExperimentConfig
    {
        ScenarioDistribution distribution;
        std::vector<Scheme> schemes{Scheme::Proposed, Scheme::BeamformingOnly, Scheme::RotationOnlyZf};
        std::vector<WeightPair> weight_grid = default_weight_grid();
        int monte_carlo_runs = 20;
        std::uint64_t seed = 1;
        int grid_points = kDefaultGridPoints;
        std::string output_path = "results/tradeoff.csv";
        SolverOptions options;
        int workers = 0;      // 0 selects the hardware thread count
        double omega1 = 0.5;  // comm weight for single-weight commands
        int pattern_users = 2;
        int pattern_nlos_paths = 0;
        int pattern_points = 241;

        void validate() const;
        int resolved_workers() const;
        bool operator==(const ExperimentConfig &) const = default;
    };

    // Outcome of one scheme on one scenario at one weight pair.
    struct SchemeOutcome
    {
        BeamformingSolution solution;
        double rotation = 0.0;
        double objective = 0.0;
        double sum_rate = 0.0;
        CrbValue crb;
        bool converged = true;
    };

    SchemeOutcome evaluate_scheme(const Scenario &scenario, Scheme scheme, WeightPair weights, const ExperimentConfig &config);

    struct RealizationRecord
    {
        int realization = 0;
        std::uint64_t seed = 0;
        Scheme scheme = Scheme::Proposed;
        double comm_weight = 0.0;
        double sum_rate = 0.0;
        double crb = 0.0;
        bool degenerate = false;
        double rotation = 0.0;
        double objective = 0.0;
        bool converged = true;

        bool operator==(const RealizationRecord &) const = default;
    };

    // One row of the tradeoff table. CRB means skip degenerate realizations; `runs` counts the rest.
    struct TradeoffRecord
    {
        Scheme scheme = Scheme::Proposed;
        double comm_weight = 0.0;
        double mean_sum_rate = 0.0;
        double mean_crb = 0.0;
        double mean_log10_crb = 0.0;
        double mean_rotation = 0.0;
        int runs = 0;
        int degenerate = 0;

        bool operator==(const TradeoffRecord &) const = default;
    };

    struct TradeoffResult
    {
        std::vector<TradeoffRecord> records;        // weight-major, schemes in config order
        std::vector<RealizationRecord> realizations; // realization-major
    };

    // Seed of realization `index`: derive_seed(config seed, index).
    std::uint64_t realization_seed(std::uint64_t seed, int index);

    // Runs fn(index, seed) for every realization, concurrently when workers > 1. Results are
    // stored by index, so the output does not depend on the worker count.
    template <typename T>
    std::vector<T> map_realizations(int runs, std::uint64_t seed, int workers, const std::function<T(int, std::uint64_t)> &fn)
    {
        std::vector<T> out(static_cast<std::size_t>(runs));
        if (workers <= 1 || runs <= 1)
        {
            for (int i = 0; i < runs; ++i)
                out[i] = fn(i, realization_seed(seed, i));
            return out;
        }
        std::atomic<int> next{0};
        std::exception_ptr error;
        std::atomic<bool> failed{false};
        auto work = [&] {
            for (int i = next++; i < runs && !failed; i = next++)
            {
                try
                {
                    out[i] = fn(i, realization_seed(seed, i));
                }
                catch (...)
                {
                    if (!failed.exchange(true))
                        error = std::current_exception();
                }
            }
        };
        {
            std::vector<std::jthread> pool;
            for (int t = 0; t < std::min(workers, runs); ++t)
                pool.emplace_back(work);
        }
        if (error)
            std::rethrow_exception(error);
        return out;
    }

    struct MetricSummary
    {
        std::string name;
        double mean = 0.0;
        double std_error = 0.0;
        int count = 0; // samples that were finite
    };

    // Generic Monte Carlo driver: `metrics` maps (index, seed) to one value per metric name.
    // Non-finite values are excluded from that metric's statistics.
    using MetricClosure = std::function<std::vector<double>(int, std::uint64_t)>;
    std::vector<MetricSummary> run_monte_carlo(int runs, std::uint64_t seed, int workers, const std::vector<std::string> &names,
                                               const MetricClosure &metrics);

    MetricSummary summarize(std::string name, const std::vector<double> &samples);

    TradeoffResult run_tradeoff_sweep(const ExperimentConfig &config);

    void write_tradeoff_csv(const std::string &path, const std::vector<TradeoffRecord> &records);
    std::vector<TradeoffRecord> read_tradeoff_csv(const std::string &path);

    struct PatternCase
    {
        std::string label;
        WeightPair weights;
        double rotation = 0.0;
        double target_effective_angle = 0.0;
        std::vector<double> user_los_effective_angles;
        BeamPattern pattern;
        double target_gain = 0.0; // raw a_T^H W a_T at the target
    };

    struct BeampatternResult
    {
        Scenario scenario;
        std::vector<double> angle_grid; // effective angles over [-pi/3, pi/3]
        std::vector<PatternCase> cases;
    };

    // Sensing-only, communication-only and joint weight pairs, in that order.
    std::vector<WeightPair> default_pattern_weights();

    // One scenario with pattern_users users; each weight pair is solved with the joint pipeline and
    // its normalized transmit pattern reported over effective angle.
    BeampatternResult run_beampattern(const ExperimentConfig &config, const std::vector<WeightPair> &weights, std::uint64_t seed);

    // Error for unusable experiment input, carrying a field path such as "distribution.num_users".
    class ConfigError : public std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    // Applies RA_ISAC_LOG (error, warn, info, debug) to the global logger; default warn.
    void configure_logging_from_env();
}

#endif
