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

#include "cli.hpp"

#include "config.hpp"

#include "risdet/geometry.hpp"
#include "risdet/hermitian.hpp"
#include "risdet/montecarlo.hpp"
#include "risdet/ris_design.hpp"
#include "risdet/signal_model.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

namespace risdet::cli {

namespace {

namespace fs = std::filesystem;

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.15g", x);
    return buf;
}

std::string fixed(double x, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, x);
    return buf;
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

class Csv {
  public:
    explicit Csv(std::initializer_list<std::string> header) { row(header); }

    void row(std::initializer_list<std::string> cells) {
        bool first = true;
        for (const auto& c : cells) {
            text_ << (first ? "" : ",") << c;
            first = false;
        }
        text_ << '\n';
    }

    std::string str() const { return text_.str(); }

  private:
    std::ostringstream text_;
};

Csv curve_csv(const std::vector<CurvePoint>& points) {
    Csv csv{"detector", "x", "estimate", "stderr", "trials", "seed"};
    for (const auto& p : points) {
        csv.row({p.detector, num(p.x), num(p.estimate), num(p.std_error), std::to_string(p.trials),
                 std::to_string(p.seed)});
    }
    return csv;
}

// State shared by the subcommand handlers.
struct Context {
    RunConfig cfg;
    ExecutionPolicy policy;
    fs::path out_dir;
    std::ostream& out;
    std::ostream& err;
    std::string schema;
    std::vector<std::string> outputs;
    Json extra = Json::object();

    void write(const std::string& file, const Csv& csv) {
        const fs::path path = out_dir / file;
        std::ofstream f(path, std::ios::binary);
        f << csv.str();
        if (!f) {
            throw std::runtime_error("cannot write " + path.string());
        }
        outputs.push_back(path.string());
    }

    ThresholdTable calibrate(const std::vector<DetectorSpec>& dets) {
        out << "calibrating " << dets.size() << " detectors on " << cfg.experiment.trials_cal
            << " H0 trials (pfa " << num(cfg.experiment.pfa) << ")\n";
        ThresholdTable t = calibrate_thresholds(dets, cfg.model, cfg.experiment, policy);
        Json j = Json::object();
        for (const auto& [key, eta] : t.entries()) {
            j[key] = eta;
        }
        extra["thresholds"] = j;
        return t;
    }
};

void print_crossings(Context& ctx, const std::vector<DetectorSpec>& dets, const std::vector<CurvePoint>& curve,
                     double level, const char* unit) {
    for (const auto& d : dets) {
        const auto pts = select(curve, d.name());
        const auto x = crossing(pts, level);
        ctx.out << "  " << d.name() << ": P_d = " << level << " at "
                << (x ? fixed(*x, 2) + " " + unit : std::string("not reached")) << '\n';
    }
}

void cmd_scenario_check(Context& ctx) {
    ctx.schema = "risdet-scenario/1";
    const ScenarioGeometry& g = ctx.cfg.model.scenario;
    const PathDistances d = path_distances(g);
    const PathDelays tau = compute_delays(d);
    const bool feasible = check_feasibility(d, g.range_resolution);
    const RisAngles ang = ris_angles(g);

    Csv csv{"quantity", "value", "unit"};
    auto emit = [&](const std::string& name, double v, const std::string& unit, int digits) {
        ctx.out << "  " << name << " = " << fixed(v, digits) << (unit.empty() ? "" : " " + unit) << '\n';
        csv.row({name, num(v), unit});
    };
    emit("d_RT", d.d_rt, "m", 2);
    emit("d_RS", d.d_rs, "m", 2);
    emit("d_ST", d.d_st, "m", 2);
    emit("tau1", tau.tau1 * 1e6, "us", 3);
    emit("tau2", tau.tau2 * 1e6, "us", 3);
    emit("tau3", tau.tau3 * 1e6, "us", 3);
    emit("theta_Si", ang.theta_si_deg, "deg", 2);
    emit("theta_So", ang.theta_so_deg, "deg", 2);
    ctx.out << "  feasibility = " << (feasible ? "true" : "false") << '\n';
    csv.row({"feasible", feasible ? "1" : "0", ""});
    if (feasible) {
        try {
            const BinLayout lay = bin_layout(g, ctx.cfg.model.primary_cells);
            ctx.out << "  (n, m) = (" << lay.n << ", " << lay.m << ") in a window of K_P = " << lay.window_size
                    << '\n';
            csv.row({"n", std::to_string(lay.n), "bin"});
            csv.row({"m", std::to_string(lay.m), "bin"});
        } catch (const WindowTooSmall& e) {
            ctx.out << "  (n, m) unavailable: " << e.what() << '\n';
        }
    }
    ctx.write("scenario-check.csv", csv);
}

void cmd_calibrate(Context& ctx) {
    ctx.schema = "risdet-thresholds/1";
    const auto dets = ctx.cfg.detector_specs();
    const ThresholdTable t = ctx.calibrate(dets);
    const ExperimentConfig& e = ctx.cfg.experiment;
    Csv csv{"threshold_key", "threshold", "pfa", "trials", "seed"};
    for (const auto& [key, eta] : t.entries()) {
        ctx.out << "  " << key << ": " << num(eta) << '\n';
        csv.row({key, num(eta), num(e.pfa), std::to_string(e.trials_cal), std::to_string(e.master_seed)});
    }
    ctx.write("calibrate.csv", csv);
}

void cmd_pd_curve(Context& ctx) {
    ctx.schema = "risdet-curve/1";
    const auto dets = ctx.cfg.detector_specs();
    const ThresholdTable t = ctx.calibrate(dets);
    const auto curve = pd_curve(dets, t, ctx.cfg.model, ctx.cfg.experiment, ctx.policy);
    print_crossings(ctx, dets, curve, 0.9, "dB");
    ctx.write("pd-curve.csv", curve_csv(curve));
}

void cmd_cfar_sweep(Context& c) {
    c.schema = "risdet-curve/1";
    const auto dets = c.cfg.detector_specs();
    c.cfg.model.cnr_db = c.cfg.cfar_ref_cnr_db;
    c.cfg.model.rho = c.cfg.cfar_ref_rho;
    const ThresholdTable t = c.calibrate(dets);
    const double pfa = c.cfg.experiment.pfa;
    auto report = [&](const std::vector<CurvePoint>& pts, const char* axis) {
        for (const auto& p : pts) {
            const bool ok = p.estimate >= pfa / 3.0 && p.estimate <= 3.0 * pfa;
            c.out << "  " << axis << " = " << num(p.x) << "  " << p.detector << ": P_fa = " << num(p.estimate)
                  << (ok ? "" : "  (outside [pfa/3, 3 pfa])") << '\n';
        }
    };
    const auto cnr = cfar_sweep(dets, t, CfarAxis::cnr, c.cfg.cfar_cnr_db, c.cfg.model, c.cfg.experiment, c.policy);
    report(cnr, "CNR");
    c.write("cfar-sweep-cnr.csv", curve_csv(cnr));
    const auto rho = cfar_sweep(dets, t, CfarAxis::rho, c.cfg.cfar_rho, c.cfg.model, c.cfg.experiment, c.policy);
    report(rho, "rho");
    c.write("cfar-sweep-rho.csv", curve_csv(rho));
}

std::vector<DetectorSpec> proposed_only(const std::vector<DetectorSpec>& dets) {
    std::vector<DetectorSpec> out;
    std::copy_if(dets.begin(), dets.end(), std::back_inserter(out), [](const auto& d) { return !d.is_baseline(); });
    if (out.empty()) {
        throw ConfigError("no detector in the list estimates (n, m)");
    }
    return out;
}

void cmd_rmse(Context& ctx) {
    ctx.schema = "risdet-rmse/1";
    const auto dets = proposed_only(ctx.cfg.detector_specs());
    const auto rows = rmse_nm(dets, ctx.cfg.model, ctx.cfg.experiment, ctx.policy);
    Csv csv{"detector", "sinr_db", "rmse_n", "rmse_m", "trials", "seed"};
    for (const auto& r : rows) {
        csv.row({r.detector, num(r.sinr_db), num(r.rmse_n), num(r.rmse_m), std::to_string(r.trials),
                 std::to_string(r.seed)});
    }
    for (const auto& d : dets) {
        std::optional<double> below_n;
        std::optional<double> below_m;
        std::vector<RmsePoint> own;
        std::copy_if(rows.begin(), rows.end(), std::back_inserter(own),
                     [&](const RmsePoint& r) { return r.detector == d.name(); });
        // smallest SINR from which the RMSE stays below one bin
        for (auto it = own.rbegin(); it != own.rend() && it->rmse_n < 1.0; ++it) {
            below_n = it->sinr_db;
        }
        for (auto it = own.rbegin(); it != own.rend() && it->rmse_m < 1.0; ++it) {
            below_m = it->sinr_db;
        }
        auto show = [](const std::optional<double>& v) { return v ? fixed(*v, 1) + " dB" : std::string("never"); };
        ctx.out << "  " << d.name() << ": RMSE_n < 1 from " << show(below_n) << ", RMSE_m < 1 from "
                << show(below_m) << '\n';
    }
    ctx.write("rmse.csv", csv);
}

void cmd_convergence(Context& ctx) {
    ctx.schema = "risdet-convergence/1";
    const RunConfig& c = ctx.cfg;
    const ConvergenceResult res = convergence_study(c.model, c.experiment, c.convergence_pairs,
                                                    c.convergence_sinr_db, c.convergence_trials, ctx.policy);
    Csv csv{"n", "m", "iteration", "mean_gain", "trials", "seed"};
    for (const auto& tr : res.traces) {
        std::optional<int> below;
        for (std::size_t h = 0; h < tr.mean_gain.size(); ++h) {
            csv.row({std::to_string(tr.n), std::to_string(tr.m), std::to_string(h + 1), num(tr.mean_gain[h]),
                     std::to_string(res.trials), std::to_string(c.experiment.master_seed)});
            if (!below && tr.mean_gain[h] < c.experiment.cglrt.epsilon) {
                below = static_cast<int>(h + 1);
            }
        }
        ctx.out << "  (n, m) = (" << tr.n << ", " << tr.m << "): mean gain below " << num(c.experiment.cglrt.epsilon)
                << " from iteration " << (below ? std::to_string(*below) : std::string("never")) << '\n';
    }
    ctx.out << "  likelihood decreased in " << res.violations << " of " << res.updates << " updates\n";
    ctx.extra["updates"] = res.updates;
    ctx.extra["violations"] = res.violations;
    ctx.write("convergence.csv", csv);
}

void cmd_sliding_window(Context& ctx) {
    ctx.schema = "risdet-curve/1";
    const auto dets = ctx.cfg.detector_specs();
    const ThresholdTable t = ctx.calibrate(dets);
    const auto curve = sliding_window(dets, t, ctx.cfg.model, ctx.cfg.experiment, ctx.cfg.window_bins,
                                      ctx.cfg.window_sinr_db, ctx.policy);
    for (const auto& p : curve) {
        ctx.out << "  first bin " << num(p.x) << "  " << p.detector << ": P_d = " << num(p.estimate) << '\n';
    }
    ctx.write("sliding-window.csv", curve_csv(curve));
}

void cmd_link_budget(Context& ctx) {
    ctx.schema = "risdet-link-budget/1";
    const LinkBudget lb = ctx.cfg.resolved_link_budget();
    Csv csv{"sigma_dbsm", "p_rtr_w", "p_rstr_w", "p_rstsr_w"};
    for (const auto& r : link_budget_curve(lb, ctx.cfg.sigma_dbsm_grid)) {
        csv.row({num(r.sigma_dbsm), num(r.p_rtr), num(r.p_rstr), num(r.p_rstsr)});
    }
    const double rstr = to_dbsm(crossover_sigma(EchoPath::rstr, lb));
    const double rstsr = to_dbsm(crossover_sigma(EchoPath::rstsr, lb));
    const double both = to_dbsm(combined_crossover_sigma(lb));
    ctx.out << "  P_RTR = " << num(received_power(EchoPath::rtr, lb, 1.0)) << " W\n"
            << "  single-bounce path overtakes the direct echo at " << fixed(rstr, 2) << " dBsm\n"
            << "  double-bounce path overtakes the direct echo at " << fixed(rstsr, 2) << " dBsm\n"
            << "  both surface paths together overtake it at " << fixed(both, 2) << " dBsm\n";
    ctx.extra["crossover_dbsm"] = {{"rstr", rstr}, {"rstsr", rstsr}, {"combined", both}};
    ctx.write("link-budget.csv", csv);
}

void cmd_ris_design(Context& ctx) {
    ctx.schema = "risdet-tapering/1";
    const RunConfig& c = ctx.cfg;
    const auto rows = tapering_comparison(c.ris_wavelength, c.ris_phi0_deg, c.ris_side_lengths);
    Csv csv{"side_length_m", "side_length_wavelengths", "uniform_dbsm", "sinc_dbsm", "lfm_dbsm"};
    for (const auto& r : rows) {
        csv.row({num(r.side_length), num(r.side_length / c.ris_wavelength), num(to_dbsm(r.uniform)),
                 num(to_dbsm(r.sinc)), num(to_dbsm(r.lfm))});
    }
    const ApertureSize a = min_size(from_dbsm(c.ris_design_sigma_dbsm), c.ris_wavelength);
    ctx.out << "  uniform aperture for " << num(c.ris_design_sigma_dbsm) << " dBsm: L = " << fixed(a.side_length, 3)
            << " m, " << a.elements << " elements per side, HPBW = " << fixed(a.hpbw_deg, 2) << " deg\n";
    ctx.extra["min_size"] = {{"side_length_m", a.side_length}, {"elements", a.elements}, {"hpbw_deg", a.hpbw_deg}};
    ctx.write("ris-design.csv", csv);
}

int env_threads() {
    const char* v = std::getenv("RISDET_THREADS");
    if (v == nullptr || *v == '\0') {
        return 0;
    }
    char* end = nullptr;
    const long n = std::strtol(v, &end, 10);
    if (*end != '\0' || n < 0) {
        throw ConfigError(std::string("RISDET_THREADS must be a non-negative integer, got '") + v + "'");
    }
    return static_cast<int>(n);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Adaptive detection experiments with RIS-assisted radar echoes", kToolName};
    app.fallthrough();
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string profile;
    std::string out_dir = "results";
    std::string detectors;
    std::optional<int> threads;
    std::vector<std::string> overrides;

    app.add_option("--config", config_path, "JSON config file or a previous run manifest");
    app.add_option("--seed", seed, "Master seed");
    app.add_option("--profile", profile, "Trial-count profile")->check(CLI::IsMember({"desk", "paper"}));
    app.add_option("--out-dir", out_dir, "Directory for CSV files and the manifest")->capture_default_str();
    app.add_option("--detectors", detectors, "Comma-separated detector names, e.g. A-GLRT,KELLY@3/SR");
    app.add_option("--threads", threads, "Worker threads (0: OpenMP default); RISDET_THREADS also works")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--set", overrides, "Dotted override such as model.rho=0.5 (repeatable)");

    const std::map<std::string, std::pair<std::string, std::function<void(Context&)>>> commands{
        {"scenario-check", {"Distances, delays, bins and RIS angles of the scenario", cmd_scenario_check}},
        {"calibrate", {"Thresholds for the listed detectors", cmd_calibrate}},
        {"pd-curve", {"Detection probability versus SINR", cmd_pd_curve}},
        {"cfar-sweep", {"False alarm rate versus CNR and rho at fixed thresholds", cmd_cfar_sweep}},
        {"rmse", {"RMSE of the (n, m) estimates versus SINR", cmd_rmse}},
        {"convergence", {"Per-iteration likelihood gain of the cyclic estimator", cmd_convergence}},
        {"sliding-window", {"Detection probability as the window slides over the echoes", cmd_sliding_window}},
        {"link-budget", {"Received power of the three echoes versus RIS RCS", cmd_link_budget}},
        {"ris-design", {"Uniform, sinc and LFM boresight RCS versus aperture size", cmd_ris_design}},
    };
    for (const auto& [name, entry] : commands) {
        CLI::App* sub = app.add_subcommand(name, entry.first);
        sub->add_option("overrides", overrides, "Dotted overrides such as model.rho=0.5");
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitConfig;
    }

    const std::string sub = app.get_subcommands().front()->get_name();
    try {
        Json doc = to_json(default_run_config());
        if (!config_path.empty()) {
            merge_config(doc, load_config_file(config_path));
        }
        if (!profile.empty()) {
            apply_profile(doc, parse_profile(profile));
        }
        for (const auto& o : overrides) {
            apply_override(doc, o);
        }
        if (!detectors.empty()) {
            doc["detectors"]["list"] = split_list(detectors);
        }
        if (seed) {
            doc["experiment"]["seed"] = *seed;
        }

        Context ctx{from_json(doc), ExecutionPolicy{}, fs::path(out_dir), out, err, {}, {}};
        ctx.policy.threads = threads ? *threads : env_threads();
        if (auto w = steering_rank_warning(ctx.cfg.model.steering())) {
            err << "warning: " << *w << '\n';
        }
        fs::create_directories(ctx.out_dir);

        out << sub << " (seed " << ctx.cfg.experiment.master_seed << ", profile " << ctx.cfg.profile << ")\n";
        commands.at(sub).second(ctx);

        Json manifest;
        manifest["tool"] = kToolName;
        manifest["version"] = kToolVersion;
        manifest["csv_schema"] = ctx.schema;
        manifest["timestamp"] = utc_timestamp();
        manifest["subcommand"] = sub;
        manifest["master_seed"] = ctx.cfg.experiment.master_seed;
        manifest["config"] = to_json(ctx.cfg);
        manifest["outputs"] = ctx.outputs;
        if (!ctx.extra.empty()) {
            manifest["results"] = ctx.extra;
        }
        const fs::path mpath = ctx.out_dir / (sub + ".manifest.json");
        std::ofstream(mpath) << manifest.dump(2) << '\n';
        for (const auto& o : ctx.outputs) {
            out << "wrote " << o << '\n';
        }
        out << "wrote " << mpath.string() << '\n';
        return 0;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const InfeasibleGeometry& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const WindowTooSmall& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

} // namespace risdet::cli
