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
#ifndef RAISAC_SERIALIZATION_HPP
#define RAISAC_SERIALIZATION_HPP

#include <string>

#include <nlohmann/json.hpp>

#include "raisac/harness.hpp"

namespace raisac
{
    using json = nlohmann::json;

    class IoError : public std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    // All readers are strict: unknown keys and wrong types raise ConfigError with the field path.
    // Missing keys keep their defaults.

    json to_json(const Scenario &scenario);
    Scenario scenario_from_json(const json &doc);

    json to_json(const ScenarioDistribution &dist);
    ScenarioDistribution distribution_from_json(const json &doc, const std::string &path = "distribution");

    json to_json(const SolverOptions &options);
    SolverOptions options_from_json(const json &doc, const std::string &path = "options");

    json to_json(const ExperimentConfig &config);
    ExperimentConfig config_from_json(const json &doc);

    ExperimentConfig load_config(const std::string &path);

    json to_json(const BeamformingSolution &solution);
    json to_json(const RealizationRecord &record);
    json to_json(const TradeoffRecord &record);
    TradeoffRecord tradeoff_record_from_json(const json &doc);
    RealizationRecord realization_record_from_json(const json &doc);

    // Tradeoff sidecar: resolved config, aggregate records and every realization.
    json tradeoff_document(const ExperimentConfig &config, const TradeoffResult &result, const json &provenance = json::object());

    // Creates the parent directory of `path` if needed and writes `text`; throws IoError on I/O failure.
    void write_text_file(const std::string &path, const std::string &text);
    std::string read_text_file(const std::string &path);

    // "results/x.csv" -> "results/x.json"
    std::string sidecar_path(const std::string &csv_path);
}

#endif
