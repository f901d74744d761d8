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

#include "config.hpp"

#include <algorithm>
#include <fstream>

namespace risdet::cli {

namespace {

std::vector<double> linspace(double a, double b, int count) {
    std::vector<double> v(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        v[static_cast<std::size_t>(i)] = a + (b - a) * i / (count - 1);
    }
    return v;
}

Json point_json(const Point2& p) { return Json::array({p.x, p.z}); }

// Typed access to doc[section][key]; the key is known to exist after merging with defaults.
class Reader {
  public:
    explicit Reader(const Json& doc) : doc_(doc) {}

    const Json& at(const char* section, const char* key) const { return doc_.at(section).at(key); }

    double number(const char* section, const char* key) const {
        const Json& j = at(section, key);
        if (!j.is_number()) {
            fail(section, key, "a number");
        }
        return j.get<double>();
    }

    long integer(const char* section, const char* key) const {
        const Json& j = at(section, key);
        if (!j.is_number_integer()) {
            fail(section, key, "an integer");
        }
        return j.get<long>();
    }

    std::uint64_t unsigned_integer(const char* section, const char* key) const {
        const Json& j = at(section, key);
        if (!j.is_number_unsigned()) {
            fail(section, key, "a non-negative integer");
        }
        return j.get<std::uint64_t>();
    }

    std::string string(const char* section, const char* key) const {
        const Json& j = at(section, key);
        if (!j.is_string()) {
            fail(section, key, "a string");
        }
        return j.get<std::string>();
    }

    std::vector<double> numbers(const char* section, const char* key) const {
        const Json& j = at(section, key);
        if (!j.is_array() || !std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_number(); })) {
            fail(section, key, "an array of numbers");
        }
        return j.get<std::vector<double>>();
    }

    std::vector<std::string> strings(const char* section, const char* key) const {
        const Json& j = at(section, key);
        if (!j.is_array() || !std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_string(); })) {
            fail(section, key, "an array of strings");
        }
        return j.get<std::vector<std::string>>();
    }

    Point2 point(const char* section, const char* key) const {
        const std::vector<double> v = numbers(section, key);
        if (v.size() != 2) {
            fail(section, key, "an [x, z] pair");
        }
        return {v[0], v[1]};
    }

    std::vector<std::pair<int, int>> pairs(const char* section, const char* key) const {
        const Json& j = at(section, key);
        std::vector<std::pair<int, int>> out;
        if (!j.is_array()) {
            fail(section, key, "an array of [n, m] pairs");
        }
        for (const Json& e : j) {
            if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer()) {
                fail(section, key, "an array of [n, m] pairs");
            }
            out.emplace_back(e[0].get<int>(), e[1].get<int>());
        }
        return out;
    }

  private:
    [[noreturn]] static void fail(const char* section, const char* key, const char* what) {
        throw ConfigError(std::string(section) + "." + key + " must be " + what);
    }

    const Json& doc_;
};

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = s.find(sep, start);
        out.emplace_back(s.substr(start, pos - start));
        if (pos == std::string_view::npos) {
            break;
        }
        start = pos + 1;
    }
    return out;
}

void merge_at(Json& base, const Json& patch, const std::string& path) {
    if (!patch.is_object()) {
        throw ConfigError((path.empty() ? std::string("config") : path) + " must be an object");
    }
    for (auto it = patch.begin(); it != patch.end(); ++it) {
        const std::string key = path.empty() ? it.key() : path + "." + it.key();
        if (!base.contains(it.key())) {
            throw ConfigError("unknown config key " + key);
        }
        Json& target = base[it.key()];
        if (target.is_object()) {
            merge_at(target, it.value(), key);
        } else {
            target = it.value();
        }
    }
}

} // namespace

std::vector<DetectorSpec> RunConfig::detector_specs() const {
    std::vector<DetectorSpec> out;
    for (const auto& name : detectors) {
        try {
            out.push_back(parse_detector(name));
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    }
    if (out.empty()) {
        throw ConfigError("detectors.list is empty");
    }
    return out;
}

LinkBudget RunConfig::resolved_link_budget() const {
    LinkBudget lb = link_budget;
    const PathDistances d = path_distances(model.scenario);
    lb.d_rt = d.d_rt;
    lb.d_rs = d.d_rs;
    lb.d_st = d.d_st;
    return lb;
}

RunConfig default_run_config() {
    RunConfig cfg;
    cfg.experiment = profile_defaults(Profile::desk);
    for (const auto& d : proposed_detectors()) {
        cfg.detectors.push_back(d.name());
    }
    for (const char* name : {"KELLY", "AMF", "KELLY@3/SR", "AMF@3/SR", "KELLY@6/S", "AMF@6/S"}) {
        cfg.detectors.emplace_back(name);
    }
    cfg.sigma_dbsm_grid = linspace(10.0, 80.0, 71);
    cfg.ris_side_lengths = linspace(20.0 * cfg.ris_wavelength, 100.0 * cfg.ris_wavelength, 20);
    return cfg;
}

Json to_json(const RunConfig& cfg) {
    const ModelConfig& m = cfg.model;
    const ExperimentConfig& e = cfg.experiment;
    Json pairs = Json::array();
    for (const auto& [n, mm] : cfg.convergence_pairs) {
        pairs.push_back(Json::array({n, mm}));
    }
    Json doc;
    doc["scenario"] = {
        {"radar_pos", point_json(m.scenario.radar_pos)},
        {"ris_pos", point_json(m.scenario.ris_pos)},
        {"target_pos", point_json(m.scenario.target_pos)},
        {"range_resolution", m.scenario.range_resolution},
        {"carrier_freq", m.scenario.carrier_freq},
    };
    doc["model"] = {
        {"N", m.n},
        {"K_P", m.primary_cells},
        {"K_S", m.secondary_cells},
        {"cnr_db", m.cnr_db},
        {"rho", m.rho},
        {"noise_power", m.noise_power},
        {"theta_r_deg", m.theta_r_deg},
        {"theta_s_deg", m.theta_s_deg},
        {"alpha_ratio", m.alpha_ratio},
    };
    doc["detectors"] = {
        {"list", cfg.detectors},
        {"cglrt_epsilon", e.cglrt.epsilon},
        {"cglrt_h_max", e.cglrt.h_max},
    };
    doc["experiment"] = {
        {"profile", cfg.profile},
        {"seed", e.master_seed},
        {"pfa", e.pfa},
        {"trials_cal", e.trials_cal},
        {"trials_pd", e.trials_pd},
        {"trials_pfa", e.trials_pfa},
        {"sinr_grid", e.sinr_grid},
        {"cfar_cnr_db", cfg.cfar_cnr_db},
        {"cfar_rho", cfg.cfar_rho},
        {"cfar_ref_cnr_db", cfg.cfar_ref_cnr_db},
        {"cfar_ref_rho", cfg.cfar_ref_rho},
        {"convergence_pairs", pairs},
        {"convergence_sinr_db", cfg.convergence_sinr_db},
        {"convergence_trials", cfg.convergence_trials},
        {"window_bins", cfg.window_bins},
        {"window_sinr_db", cfg.window_sinr_db},
    };
    const LinkBudget& lb = cfg.link_budget;
    doc["link_budget"] = {
        {"p_t", lb.p_t},
        {"g_t_dbi", lb.g_t_dbi},
        {"wavelength", lb.wavelength},
        {"sigma_rtr", lb.sigma_rtr},
        {"sigma_str", lb.sigma_str},
        {"sigma_sts", lb.sigma_sts},
        {"sigma_dbsm_grid", cfg.sigma_dbsm_grid},
    };
    doc["ris"] = {
        {"wavelength", cfg.ris_wavelength},
        {"phi0_deg", cfg.ris_phi0_deg},
        {"design_sigma_dbsm", cfg.ris_design_sigma_dbsm},
        {"side_lengths", cfg.ris_side_lengths},
    };
    return doc;
}

RunConfig from_json(const Json& patch) {
    Json doc = to_json(default_run_config());
    merge_config(doc, patch);
    const Reader r(doc);

    RunConfig cfg = default_run_config();
    ModelConfig& m = cfg.model;
    m.scenario.radar_pos = r.point("scenario", "radar_pos");
    m.scenario.ris_pos = r.point("scenario", "ris_pos");
    m.scenario.target_pos = r.point("scenario", "target_pos");
    m.scenario.range_resolution = r.number("scenario", "range_resolution");
    m.scenario.carrier_freq = r.number("scenario", "carrier_freq");

    m.n = static_cast<int>(r.integer("model", "N"));
    m.primary_cells = static_cast<int>(r.integer("model", "K_P"));
    m.secondary_cells = static_cast<int>(r.integer("model", "K_S"));
    m.cnr_db = r.number("model", "cnr_db");
    m.rho = r.number("model", "rho");
    m.noise_power = r.number("model", "noise_power");
    m.theta_r_deg = r.number("model", "theta_r_deg");
    m.theta_s_deg = r.number("model", "theta_s_deg");
    m.alpha_ratio = r.number("model", "alpha_ratio");

    cfg.detectors = r.strings("detectors", "list");
    ExperimentConfig& e = cfg.experiment;
    e.cglrt.epsilon = r.number("detectors", "cglrt_epsilon");
    e.cglrt.h_max = static_cast<int>(r.integer("detectors", "cglrt_h_max"));

    cfg.profile = r.string("experiment", "profile");
    parse_profile(cfg.profile);
    e.master_seed = r.unsigned_integer("experiment", "seed");
    e.pfa = r.number("experiment", "pfa");
    e.trials_cal = r.integer("experiment", "trials_cal");
    e.trials_pd = r.integer("experiment", "trials_pd");
    e.trials_pfa = r.integer("experiment", "trials_pfa");
    e.sinr_grid = r.numbers("experiment", "sinr_grid");
    cfg.cfar_cnr_db = r.numbers("experiment", "cfar_cnr_db");
    cfg.cfar_rho = r.numbers("experiment", "cfar_rho");
    cfg.cfar_ref_cnr_db = r.number("experiment", "cfar_ref_cnr_db");
    cfg.cfar_ref_rho = r.number("experiment", "cfar_ref_rho");
    cfg.convergence_pairs = r.pairs("experiment", "convergence_pairs");
    cfg.convergence_sinr_db = r.number("experiment", "convergence_sinr_db");
    cfg.convergence_trials = r.integer("experiment", "convergence_trials");
    cfg.window_bins = static_cast<int>(r.integer("experiment", "window_bins"));
    cfg.window_sinr_db = r.number("experiment", "window_sinr_db");

    LinkBudget& lb = cfg.link_budget;
    lb.p_t = r.number("link_budget", "p_t");
    lb.g_t_dbi = r.number("link_budget", "g_t_dbi");
    lb.wavelength = r.number("link_budget", "wavelength");
    lb.sigma_rtr = r.number("link_budget", "sigma_rtr");
    lb.sigma_str = r.number("link_budget", "sigma_str");
    lb.sigma_sts = r.number("link_budget", "sigma_sts");
    cfg.sigma_dbsm_grid = r.numbers("link_budget", "sigma_dbsm_grid");

    cfg.ris_wavelength = r.number("ris", "wavelength");
    cfg.ris_phi0_deg = r.number("ris", "phi0_deg");
    cfg.ris_design_sigma_dbsm = r.number("ris", "design_sigma_dbsm");
    cfg.ris_side_lengths = r.numbers("ris", "side_lengths");

    try {
        m.validate();
        e.validate();
        e.cglrt.validate();
    } catch (const std::invalid_argument& ex) {
        throw ConfigError(ex.what());
    }
    return cfg;
}

Json load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file " + path);
    }
    Json doc;
    try {
        doc = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ConfigError("cannot parse " + path + ": " + e.what());
    }
    if (doc.is_object() && doc.contains("tool") && doc.contains("config")) {
        return doc["config"];
    }
    return doc;
}

void merge_config(Json& base, const Json& patch) { merge_at(base, patch, ""); }

void apply_override(Json& doc, std::string_view assignment) {
    const std::size_t eq = assignment.find('=');
    if (eq == std::string_view::npos || eq == 0) {
        throw ConfigError("override must look like section.key=value: " + std::string(assignment));
    }
    const std::vector<std::string> path = split(assignment.substr(0, eq), '.');
    const std::string text(assignment.substr(eq + 1));
    Json* node = &doc;
    for (const auto& key : path) {
        if (!node->is_object() || !node->contains(key)) {
            throw ConfigError("unknown config key " + std::string(assignment.substr(0, eq)));
        }
        node = &(*node)[key];
    }
    if (node->is_object()) {
        throw ConfigError("override must name a value, not a section: " + std::string(assignment.substr(0, eq)));
    }
    Json value = Json::parse(text, nullptr, false);
    *node = value.is_discarded() ? Json(text) : std::move(value);
}

Profile parse_profile(const std::string& name) {
    if (name == "desk") {
        return Profile::desk;
    }
    if (name == "paper") {
        return Profile::paper;
    }
    throw ConfigError("unknown profile '" + name + "' (expected desk or paper)");
}

std::string profile_name(Profile p) { return p == Profile::paper ? "paper" : "desk"; }

void apply_profile(Json& doc, Profile p) {
    const ExperimentConfig e = profile_defaults(p);
    Json& x = doc["experiment"];
    x["profile"] = profile_name(p);
    x["pfa"] = e.pfa;
    x["trials_cal"] = e.trials_cal;
    x["trials_pd"] = e.trials_pd;
    x["trials_pfa"] = e.trials_pfa;
    x["sinr_grid"] = e.sinr_grid;
}

} // namespace risdet::cli
