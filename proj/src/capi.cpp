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
#include "raisac/raisac.h"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "raisac/serialization.hpp"

struct ra_config
{
    raisac::ExperimentConfig config;
    std::map<std::string, std::string> overrides; // as given, for the provenance snapshot
    std::optional<std::string> output;
    bool omega1_overridden = false;
};

namespace
{
    using namespace raisac;

    thread_local std::string last_error;

    ra_status fail(ra_status status, const std::string &message)
    {
        last_error = message;
        return status;
    }

    // Maps exceptions escaping the library onto status codes.
    template <typename Fn>
    ra_status guarded(Fn &&fn)
    {
        try
        {
            configure_logging_from_env();
            last_error.clear();
            return fn();
        }
        catch (const ConfigError &e)
        {
            return fail(RA_ERR_CONFIG, e.what());
        }
        catch (const IoError &e)
        {
            return fail(RA_ERR_IO, e.what());
        }
        catch (const MultiplierSearchError &e)
        {
            return fail(RA_ERR_NUMERIC, e.what());
        }
        catch (const SingularChannelError &e)
        {
            return fail(RA_ERR_NUMERIC, e.what());
        }
        catch (const std::invalid_argument &e)
        {
            return fail(RA_ERR_INVALID_ARGUMENT, e.what());
        }
        catch (const std::out_of_range &e)
        {
            return fail(RA_ERR_INVALID_ARGUMENT, e.what());
        }
        catch (const std::exception &e)
        {
            return fail(RA_ERR_INTERNAL, e.what());
        }
        catch (...)
        {
            return fail(RA_ERR_INTERNAL, "unknown error");
        }
    }

    char *dup_string(const std::string &s)
    {
        char *out = new char[s.size() + 1];
        std::memcpy(out, s.c_str(), s.size() + 1);
        return out;
    }

    template <typename T>
    T parse_number(const std::string &key, const std::string &value)
    {
        T out{};
        const char *first = value.data();
        const char *last = value.data() + value.size();
        const auto [ptr, ec] = std::from_chars(first, last, out);
        if (ec != std::errc() || ptr != last)
            throw std::invalid_argument("override " + key + ": cannot parse \"" + value + "\"");
        return out;
    }

    std::string directory_of(const std::string &path)
    {
        const std::filesystem::path p(path);
        return p.has_parent_path() ? p.parent_path().string() : std::string(".");
    }

    std::string output_for(const ra_config &c, const std::string &default_name)
    {
        if (c.output)
            return *c.output;
        return (std::filesystem::path(directory_of(c.config.output_path)) / default_name).string();
    }

    json provenance(const ra_config &c)
    {
        return {{"library_version", ra_version()}, {"overrides", c.overrides}};
    }

    double elapsed_since(std::chrono::steady_clock::time_point start)
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }

    ra_status emit(const json &summary, char **out_summary)
    {
        if (out_summary)
            *out_summary = dup_string(summary.dump());
        return RA_OK;
    }

    json crb_json(const CrbValue &crb) { return crb.degenerate ? json(nullptr) : json(crb.value); }

    Scenario single_scenario(const ExperimentConfig &config)
    {
        return draw_scenario(config.distribution, realization_seed(config.seed, 0));
    }

    std::string format_double(double x)
    {
        char buf[64];
        const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
        return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
    }
}

extern "C" {

const char *ra_version(void) { return "1.0.0"; }

const char *ra_last_error(void) { return last_error.c_str(); }

ra_status ra_config_new_default(ra_config **out)
{
    if (!out)
        return fail(RA_ERR_INVALID_ARGUMENT, "ra_config_new_default: null output pointer");
    return guarded([&] {
        *out = new ra_config{};
        return RA_OK;
    });
}

ra_status ra_config_load_file(const char *path, ra_config **out)
{
    if (!path || !out)
        return fail(RA_ERR_INVALID_ARGUMENT, "ra_config_load_file: null argument");
    return guarded([&] {
        auto cfg = std::make_unique<ra_config>();
        cfg->config = load_config(path);
        *out = cfg.release();
        return RA_OK;
    });
}

ra_status ra_config_load_json(const char *json_text, ra_config **out)
{
    if (!json_text || !out)
        return fail(RA_ERR_INVALID_ARGUMENT, "ra_config_load_json: null argument");
    return guarded([&] {
        json doc;
        try
        {
            doc = json::parse(json_text);
        }
        catch (const json::parse_error &e)
        {
            throw ConfigError(std::string("malformed JSON: ") + e.what());
        }
        auto cfg = std::make_unique<ra_config>();
        cfg->config = config_from_json(doc);
        *out = cfg.release();
        return RA_OK;
    });
}

void ra_config_free(ra_config *config) { delete config; }

ra_status ra_config_set(ra_config *config, const char *key, const char *value)
{
    if (!config || !key || !value)
        return fail(RA_ERR_INVALID_ARGUMENT, "ra_config_set: null argument");
    return guarded([&] {
        const std::string k(key), v(value);
        ExperimentConfig next = config->config;
        if (k == "seed")
            next.seed = parse_number<std::uint64_t>(k, v);
        else if (k == "grid_points")
            next.grid_points = parse_number<int>(k, v);
        else if (k == "output")
        {
            if (v.empty())
                throw std::invalid_argument("override output: empty path");
            next.output_path = v;
        }
        else if (k == "omega1")
            next.omega1 = parse_number<double>(k, v);
        else if (k == "workers")
            next.workers = parse_number<int>(k, v);
        else if (k == "mc_runs")
            next.monte_carlo_runs = parse_number<int>(k, v);
        else
            throw std::invalid_argument("unknown override key \"" + k + "\"");
        try
        {
            next.validate();
        }
        catch (const ConfigError &e)
        {
            throw std::invalid_argument(std::string("override ") + k + ": " + e.what());
        }
        config->config = std::move(next);
        config->overrides[k] = v;
        if (k == "output")
            config->output = v;
        if (k == "omega1")
            config->omega1_overridden = true;
        return RA_OK;
    });
}

ra_status ra_config_to_json(const ra_config *config, char **out_json)
{
    if (!config || !out_json)
        return fail(RA_ERR_INVALID_ARGUMENT, "ra_config_to_json: null argument");
    return guarded([&] {
        *out_json = dup_string(to_json(config->config).dump(2));
        return RA_OK;
    });
}

void ra_string_free(char *text) { delete[] text; }

ra_status ra_run_solve(const ra_config *config, char **out_summary)
{
    if (!config)
        return fail(RA_ERR_INVALID_ARGUMENT, "ra_run_solve: null config");
    return guarded([&] {
        const auto start = std::chrono::steady_clock::now();
        const ExperimentConfig &c = config->config;
        c.validate();
        const Scenario scenario = single_scenario(c);
        const WeightPair weights = WeightPair::from_comm(c.omega1);
        const auto r = joint_solve(scenario, weights, c.options, c.grid_points);
        const double rate = sum_rate(scenario, r.best_solution.beams(), r.best_rotation);
        const CrbValue crb = crb_closed(r.best_solution, scenario, r.best_rotation);

        const json result = {{"omega1", c.omega1},
                             {"objective", r.best_objective},
                             {"phi_rad", r.best_rotation},
                             {"sum_rate_bps_hz", rate},
                             {"crb_rad2", crb_json(crb)},
                             {"solution", to_json(r.best_solution)}};
        const std::string path = output_for(*config, "solve.json");
        write_text_file(path, json{{"config", to_json(c)}, {"provenance", provenance(*config)}, {"scenario", to_json(scenario)},
                                   {"result", result}}
                                  .dump(2));
        return emit({{"command", "solve"},
                     {"objective", r.best_objective},
                     {"phi_rad", r.best_rotation},
                     {"sum_rate_bps_hz", rate},
                     {"crb_rad2", crb_json(crb)},
                     {"output", path},
                     {"wall_time_s", elapsed_since(start)}},
                    out_summary);
    });
}

ra_status ra_run_rotation_search(const ra_config *config, char **out_summary)
{
    if (!config)
        return fail(RA_ERR_INVALID_ARGUMENT, "ra_run_rotation_search: null config");
    return guarded([&] {
        const auto start = std::chrono::steady_clock::now();
        const ExperimentConfig &c = config->config;
        c.validate();
        const Scenario scenario = single_scenario(c);
        const auto r = rotation_search(scenario, WeightPair::from_comm(c.omega1), c.options, c.grid_points);

        std::string csv = "phi_rad,objective,failed,converged\n";
        json profile = json::array();
        for (const auto &p : r.profile)
        {
            csv += format_double(p.rotation) + "," + format_double(p.objective) + "," + (p.failed ? "1" : "0") + "," +
                   (p.converged ? "1" : "0") + "\n";
            profile.push_back({{"phi_rad", p.rotation},
                               {"objective", std::isfinite(p.objective) ? json(p.objective) : json(nullptr)},
                               {"failed", p.failed},
                               {"converged", p.converged}});
        }
        const std::string path = output_for(*config, "rotation_search.csv");
        write_text_file(path, csv);
        write_text_file(sidecar_path(path), json{{"config", to_json(c)},
                                                 {"provenance", provenance(*config)},
                                                 {"scenario", to_json(scenario)},
                                                 {"best_rotation", r.best_rotation},
                                                 {"best_objective", r.best_objective},
                                                 {"profile", profile}}
                                                .dump(2));
        return emit({{"command", "rotation-search"},
                     {"objective", r.best_objective},
                     {"phi_rad", r.best_rotation},
                     {"grid_points", static_cast<int>(r.profile.size())},
                     {"output", path},
                     {"wall_time_s", elapsed_since(start)}},
                    out_summary);
    });
}

ra_status ra_run_tradeoff(const ra_config *config, char **out_summary)
{
    if (!config)
        return fail(RA_ERR_INVALID_ARGUMENT, "ra_run_tradeoff: null config");
    return guarded([&] {
        const auto start = std::chrono::steady_clock::now();
        ExperimentConfig c = config->config;
        if (config->omega1_overridden)
            c.weight_grid = {WeightPair::from_comm(c.omega1)};
        const TradeoffResult result = run_tradeoff_sweep(c);
        write_tradeoff_csv(c.output_path, result.records);
        write_text_file(sidecar_path(c.output_path), tradeoff_document(c, result, provenance(*config)).dump(2));

        double best_rate = 0.0;
        for (const auto &r : result.records)
            best_rate = std::max(best_rate, r.mean_sum_rate);
        return emit({{"command", "tradeoff"},
                     {"rows", static_cast<int>(result.records.size())},
                     {"max_mean_sum_rate_bps_hz", best_rate},
                     {"output", c.output_path},
                     {"wall_time_s", elapsed_since(start)}},
                    out_summary);
    });
}

ra_status ra_run_beampattern(const ra_config *config, char **out_summary)
{
    if (!config)
        return fail(RA_ERR_INVALID_ARGUMENT, "ra_run_beampattern: null config");
    return guarded([&] {
        const auto start = std::chrono::steady_clock::now();
        const ExperimentConfig &c = config->config;
        const auto result = run_beampattern(c, default_pattern_weights(), realization_seed(c.seed, 0));

        std::string csv = "effective_angle_rad";
        for (const auto &pc : result.cases)
            csv += "," + pc.label;
        csv += "\n";
        for (std::size_t i = 0; i < result.angle_grid.size(); ++i)
        {
            csv += format_double(result.angle_grid[i]);
            for (const auto &pc : result.cases)
                csv += "," + format_double(pc.pattern.gains[i]);
            csv += "\n";
        }
        json cases = json::array();
        for (const auto &pc : result.cases)
            cases.push_back({{"label", pc.label},
                             {"omega1", pc.weights.comm_weight},
                             {"phi_rad", pc.rotation},
                             {"target_effective_angle_rad", pc.target_effective_angle},
                             {"user_los_effective_angles_rad", pc.user_los_effective_angles},
                             {"target_gain", pc.target_gain},
                             {"all_zero", pc.pattern.all_zero}});

        const std::string path = output_for(*config, "beampattern.csv");
        write_text_file(path, csv);
        write_text_file(sidecar_path(path), json{{"config", to_json(c)},
                                                 {"provenance", provenance(*config)},
                                                 {"scenario", to_json(result.scenario)},
                                                 {"cases", cases}}
                                                .dump(2));
        return emit({{"command", "beampattern"},
                     {"cases", static_cast<int>(result.cases.size())},
                     {"points", static_cast<int>(result.angle_grid.size())},
                     {"output", path},
                     {"wall_time_s", elapsed_since(start)}},
                    out_summary);
    });
}

ra_status ra_run_montecarlo(const ra_config *config, char **out_summary)
{
    if (!config)
        return fail(RA_ERR_INVALID_ARGUMENT, "ra_run_montecarlo: null config");
    return guarded([&] {
        const auto start = std::chrono::steady_clock::now();
        const ExperimentConfig &c = config->config;
        c.validate();
        const WeightPair weights = WeightPair::from_comm(c.omega1);

        std::vector<std::string> names;
        for (Scheme s : c.schemes)
            for (const char *metric : {"sum_rate_bps_hz", "crb_rad2", "log10_crb", "phi_rad", "objective"})
                names.push_back(std::string(scheme_name(s)) + "." + metric);

        const auto stats = run_monte_carlo(c.monte_carlo_runs, c.seed, c.resolved_workers(), names, [&](int, std::uint64_t seed) {
            const Scenario scenario = draw_scenario(c.distribution, seed);
            std::vector<double> row;
            for (Scheme s : c.schemes)
            {
                const SchemeOutcome o = evaluate_scheme(scenario, s, weights, c);
                const double crb = o.crb.degenerate ? std::nan("") : o.crb.value;
                row.insert(row.end(), {o.sum_rate, crb, std::log10(crb), o.rotation, o.objective});
            }
            return row;
        });

        json metrics = json::array();
        for (const auto &m : stats)
            metrics.push_back({{"name", m.name},
                               {"mean", std::isfinite(m.mean) ? json(m.mean) : json(nullptr)},
                               {"std_error", std::isfinite(m.std_error) ? json(m.std_error) : json(nullptr)},
                               {"count", m.count}});
        const std::string path = output_for(*config, "montecarlo.json");
        write_text_file(path, json{{"config", to_json(c)}, {"provenance", provenance(*config)}, {"omega1", c.omega1}, {"metrics", metrics}}
                                  .dump(2));
        json summary = {{"command", "montecarlo"}, {"runs", c.monte_carlo_runs}, {"output", path}, {"wall_time_s", elapsed_since(start)}};
        if (!stats.empty())
            summary["first_metric"] = {{"name", stats[0].name}, {"mean", stats[0].mean}};
        return emit(summary, out_summary);
    });
}

ra_status ra_max_rotation_gain(double theta0, double theta1, int num_elements, double spacing, double *gain, double *rotation)
{
    if (!gain || !rotation)
        return fail(RA_ERR_INVALID_ARGUMENT, "ra_max_rotation_gain: null output pointer");
    if (num_elements < 2 || !(spacing > 0.0))
        return fail(RA_ERR_INVALID_ARGUMENT, "ra_max_rotation_gain: need num_elements >= 2 and positive spacing");
    return guarded([&] {
        const auto r = max_rotation_gain(theta0, theta1, num_elements, spacing);
        if (!r)
            throw std::invalid_argument("ra_max_rotation_gain: fixed-array correlation is at a null, gain unbounded");
        *gain = r->gain;
        *rotation = r->rotation;
        return RA_OK;
    });
}

ra_status ra_sensing_only_rotation(double theta, double region_lo, double region_hi, double *rotation)
{
    if (!rotation)
        return fail(RA_ERR_INVALID_ARGUMENT, "ra_sensing_only_rotation: null output pointer");
    return guarded([&] {
        *rotation = sensing_only_rotation(theta, Interval{region_lo, region_hi});
        return RA_OK;
    });
}

ra_status ra_crb_chi(int rx_elements, double spacing, double wavelength, int snapshots, double sensing_snr, double *chi)
{
    if (!chi)
        return fail(RA_ERR_INVALID_ARGUMENT, "ra_crb_chi: null output pointer");
    return guarded([&] {
        if (snapshots < 1 || !(sensing_snr > 0.0))
            throw std::invalid_argument("ra_crb_chi: need snapshots >= 1 and positive sensing SNR");
        Scenario s;
        s.rx_geometry = ArrayGeometry(rx_elements, spacing, wavelength);
        s.snapshots = snapshots;
        s.target.sensing_snr = sensing_snr;
        *chi = crb_chi(s);
        return RA_OK;
    });
}

} // extern "C"
