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
#include <cstdio>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "raisac/raisac.h"

namespace
{
    struct Overrides
    {
        std::string config_path;
        std::optional<std::string> seed, output, grid_points, omega1, workers, mc_runs;
    };

    void add_common(CLI::App *cmd, Overrides &o)
    {
        cmd->add_option("--config", o.config_path, "JSON experiment configuration");
        cmd->add_option("--seed", o.seed, "master seed");
        cmd->add_option("--output", o.output, "output file");
        cmd->add_option("--grid-points", o.grid_points, "rotation grid size");
        cmd->add_option("--omega1", o.omega1, "communication weight in [0, 1]");
        cmd->add_option("--workers", o.workers, "worker threads (0 = hardware count)");
        cmd->add_option("--mc-runs", o.mc_runs, "Monte Carlo realizations");
    }

    int report(ra_status status, const char *what)
    {
        std::cerr << "raisac: " << what << ": " << ra_last_error() << "\n";
        return static_cast<int>(status);
    }

    // Loads the config, applies the overrides and runs `command`.
    int execute(const Overrides &o, const std::function<ra_status(const ra_config *, char **)> &command)
    {
        ra_config *config = nullptr;
        ra_status status = o.config_path.empty() ? ra_config_new_default(&config) : ra_config_load_file(o.config_path.c_str(), &config);
        if (status != RA_OK)
            return report(status, "config");

        const std::vector<std::pair<const char *, const std::optional<std::string> *>> keys{
            {"seed", &o.seed},       {"output", &o.output},   {"grid_points", &o.grid_points},
            {"omega1", &o.omega1},   {"workers", &o.workers}, {"mc_runs", &o.mc_runs}};
        for (const auto &[key, value] : keys)
        {
            if (!*value)
                continue;
            status = ra_config_set(config, key, (*value)->c_str());
            if (status != RA_OK)
            {
                ra_config_free(config);
                return report(status, "override");
            }
        }

        char *summary = nullptr;
        status = command(config, &summary);
        ra_config_free(config);
        if (status != RA_OK)
            return report(status, "run");

        // Wall time is split off to stderr so stdout stays identical across repeated runs.
        std::string line(summary);
        ra_string_free(summary);
        const std::string key = ",\"wall_time_s\":";
        if (const auto pos = line.find(key); pos != std::string::npos)
        {
            auto end = line.find_first_of(",}", pos + key.size());
            std::cerr << "wall_time_s " << line.substr(pos + key.size(), end - pos - key.size()) << "\n";
            line.erase(pos, end - pos);
        }
        std::cout << line << std::endl;
        return 0;
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"Joint beamforming and array rotation for rotatable-antenna ISAC"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(ra_version()));

    Overrides o;
    std::function<ra_status(const ra_config *, char **)> command;

    const std::vector<std::pair<std::string, std::pair<std::string, ra_status (*)(const ra_config *, char **)>>> commands{
        {"solve", {"joint solve of one realization at --omega1", ra_run_solve}},
        {"rotation-search", {"objective profile over the rotation grid", ra_run_rotation_search}},
        {"tradeoff", {"communication/sensing tradeoff sweep over all schemes", ra_run_tradeoff}},
        {"beampattern", {"transmit beampatterns for sensing, communication and joint weights", ra_run_beampattern}},
        {"montecarlo", {"Monte Carlo statistics of every scheme at --omega1", ra_run_montecarlo}},
    };
    for (const auto &[name, entry] : commands)
    {
        auto *cmd = app.add_subcommand(name, entry.first);
        add_common(cmd, o);
        auto fn = entry.second;
        cmd->callback([&command, fn] { command = fn; });
    }

    auto *validate = app.add_subcommand("validate-config", "check a configuration file and print it resolved");
    add_common(validate, o);
    validate->callback([&command] {
        command = [](const ra_config *config, char **out) { return ra_config_to_json(config, out); };
    });

    CLI11_PARSE(app, argc, argv);
    return execute(o, command);
}
