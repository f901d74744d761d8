// SPDX-License-Identifier: Apache-2.0
//
// risdet: adaptive detection with RIS-assisted radar echoes
// Copyright (C) 2026 The risdet authors
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

#pragma once

#include "risdet/montecarlo.hpp"
#include "risdet/ris_design.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace risdet::cli {

using Json = nlohmann::ordered_json;

/// Malformed config file, unknown key, wrong value type or invalid override. Maps to exit 2.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Everything a subcommand needs. The JSON form has the sections scenario, model,
/// detectors, experiment, link_budget and ris.
struct RunConfig {
    std::string profile = "desk";
    ModelConfig model;
    ExperimentConfig experiment;
    std::vector<std::string> detectors;

    // cfar-sweep: thresholds are calibrated at the reference point, then held fixed
    std::vector<double> cfar_cnr_db{-15.0, 0.0, 15.0, 30.0};
    std::vector<double> cfar_rho{0.1, 0.5, 0.9};
    double cfar_ref_cnr_db = 25.0;
    double cfar_ref_rho = 0.9;

    std::vector<std::pair<int, int>> convergence_pairs{{2, 3}, {3, 6}, {4, 5}};
    double convergence_sinr_db = 0.0;
    long convergence_trials = 1000;

    int window_bins = 20;
    double window_sinr_db = 0.0;

    LinkBudget link_budget; // distances are taken from model.scenario
    std::vector<double> sigma_dbsm_grid;

    double ris_wavelength = 0.1;
    double ris_phi0_deg = 10.0;
    double ris_design_sigma_dbsm = 55.0;
    std::vector<double> ris_side_lengths;

    std::vector<DetectorSpec> detector_specs() const;
    LinkBudget resolved_link_budget() const;
};

RunConfig default_run_config();

Json to_json(const RunConfig& cfg);

/// Strict: every key must be known and correctly typed. Missing keys keep their defaults.
RunConfig from_json(const Json& doc);

/// Reads a config file. A run manifest is accepted too; its "config" member is used.
Json load_config_file(const std::string& path);

/// Recursively copies `patch` into `base`. Keys absent from `base` are rejected.
void merge_config(Json& base, const Json& patch);

/// Applies "section.key=value". The value is parsed as JSON when possible, else taken as a string.
void apply_override(Json& doc, std::string_view assignment);

Profile parse_profile(const std::string& name);
std::string profile_name(Profile p);

/// Replaces the experiment trial counts, pfa and SINR grid with the profile defaults.
void apply_profile(Json& doc, Profile p);

} // namespace risdet::cli
