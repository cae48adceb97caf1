// SPDX-License-Identifier: Apache-2.0
//
// beamsec: attack injection and detection for beamformed massive-MIMO links
// Copyright (C) 2026 The beamsec authors
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

#ifndef BEAMSEC_CONFIG_HPP
#define BEAMSEC_CONFIG_HPP

#include "beamsec/dataset.hpp"
#include "beamsec/experiments.hpp"
#include "beamsec/scenario.hpp"

#include "json.hpp"

#include <filesystem>
#include <string>

namespace beamsec
{

/// Everything the command-line tool reads from its configuration document.
/// Every section and key is optional; absent keys keep these defaults.
struct Config
{
    RateSweepConfig sweep;
    CusumExperimentConfig cusum;
    KsExperimentConfig ks;
    ScenarioConfig scenario = default_scenario();
    DatasetConfig dataset;
};

/// Parses and validates a configuration object. Unknown keys, wrong types
/// and invalid values raise config_error naming the JSON path.
Config config_from_json(const nlohmann::json &doc);
nlohmann::ordered_json config_to_json(const Config &cfg);

/// Loads a configuration file. A manifest written by the tool is accepted
/// too, in which case its embedded configuration snapshot is used.
Config load_config(const std::filesystem::path &path);

} // namespace beamsec

#endif
