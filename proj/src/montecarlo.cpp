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

#include "risdet/montecarlo.hpp"

#include "risdet/rng.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>

namespace risdet {

namespace {

// Runs f(t) for t in [0, count). Each trial owns its output slots, so the result does not
// depend on scheduling; the exception of the lowest failing trial is rethrown.
template <typename F>
void for_each_trial(long count, const ExecutionPolicy& policy, F&& f) {
    if (!policy.parallel) {
        for (long t = 0; t < count; ++t) {
            f(t);
        }
        return;
    }
    std::exception_ptr error;
    long error_trial = std::numeric_limits<long>::max();
    const int threads = policy.threads > 0 ? policy.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 16) num_threads(threads)
    for (long t = 0; t < count; ++t) {
        try {
            f(t);
        } catch (...) {
#pragma omp critical(risdet_trial_error)
            {
                if (t < error_trial) {
                    error_trial = t;
                    error = std::current_exception();
                }
            }
        }
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

// Everything a trial needs that does not change from trial to trial.
struct TrialSetup {
    HermitianFactor m_factor;
    SteeringSet steering;
    BinLayout layout;
    CMatrix covariance;

    explicit TrialSetup(const ModelConfig& model)
        : m_factor(cholesky(model.covariance())), steering(model.steering()), layout(model.layout()),
          covariance(model.covariance()) {}

    TargetParams target(double sinr_db, double ratio) const {
        return {alpha_from_sinr(sinr_db, covariance, steering.v_r, ratio), layout};
    }
};

// Detector statistics per trial, laid out trial-major.
std::vector<double> run_statistics(std::span<const DetectorSpec> detectors, const ModelConfig& model,
                                   const ExperimentConfig& exp, Hypothesis hyp, double sinr_db, Stream stream,
                                   std::uint64_t point, long trials, const ExecutionPolicy& policy) {
    model.validate();
    const TrialSetup setup(model);
    const TargetParams target = hyp == Hypothesis::h1 ? setup.target(sinr_db, model.alpha_ratio)
                                                      : TargetParams{{}, setup.layout};
    const std::size_t nd = detectors.size();
    std::vector<double> stats(static_cast<std::size_t>(trials) * nd);
    for_each_trial(trials, policy, [&](long t) {
        const DataSet data = synthesize(hyp, target, setup.m_factor, setup.steering, model.primary_cells,
                                        model.secondary_cells, derive_seed(exp.master_seed, stream, point, t));
        DetectionWorkspace ws(data, setup.steering);
        for (std::size_t d = 0; d < nd; ++d) {
            stats[static_cast<std::size_t>(t) * nd + d] = ws.evaluate(detectors[d], exp.cglrt).statistic;
        }
    });
    return stats;
}

std::vector<CurvePoint> exceedances(std::span<const DetectorSpec> detectors, const ThresholdTable& thresholds,
                                    const std::vector<double>& stats, long trials, double x, std::uint64_t seed) {
    const std::size_t nd = detectors.size();
    std::vector<CurvePoint> out;
    for (std::size_t d = 0; d < nd; ++d) {
        const double eta = thresholds.at(detectors[d]);
        long hits = 0;
        for (long t = 0; t < trials; ++t) {
            hits += stats[static_cast<std::size_t>(t) * nd + d] > eta ? 1 : 0;
        }
        const double p = static_cast<double>(hits) / static_cast<double>(trials);
        out.push_back({detectors[d].name(), x, p, binomial_std_error(p, trials), trials, seed});
    }
    return out;
}

void require_thresholds(std::span<const DetectorSpec> detectors, const ThresholdTable& thresholds) {
    for (const auto& d : detectors) {
        if (!thresholds.contains(d)) {
            throw std::invalid_argument("no threshold calibrated for detector " + d.name());
        }
    }
}

} // namespace

void ModelConfig::validate() const {
    if (n < 1) {
        throw std::invalid_argument("model: N must be at least 1");
    }
    if (primary_cells < 3) {
        throw std::invalid_argument("model: K_P must be at least 3");
    }
    if (secondary_cells < n) {
        throw std::invalid_argument("model: K_S must be at least N");
    }
    if (!(rho >= 0.0 && rho < 1.0)) {
        throw std::invalid_argument("model: rho must lie in [0, 1)");
    }
    if (!(noise_power > 0.0) || !std::isfinite(cnr_db)) {
        throw std::invalid_argument("model: noise power must be positive and CNR finite");
    }
    if (!(alpha_ratio >= 0.0)) {
        throw std::invalid_argument("model: alpha ratio must be non-negative");
    }
    scenario.validate();
}

CMatrix ModelConfig::covariance() const {
    return build_covariance(CovarianceModel::from_cnr(cnr_db, rho, static_cast<std::size_t>(n), noise_power));
}

SteeringSet ModelConfig::steering() const {
    return spatial_steering(theta_r_deg, theta_s_deg, static_cast<std::size_t>(n));
}

BinLayout ModelConfig::layout() const { return bin_layout(scenario, primary_cells); }

void ExperimentConfig::validate() const {
    if (!(pfa > 0.0 && pfa < 1.0)) {
        throw std::invalid_argument("experiment: pfa must lie in (0, 1)");
    }
    if (static_cast<double>(trials_cal) < 10.0 / pfa - 1e-9) {
        throw std::invalid_argument("experiment: need at least 10/pfa calibration trials");
    }
    if (trials_pd < 1 || trials_pfa < 1) {
        throw std::invalid_argument("experiment: trial counts must be positive");
    }
    cglrt.validate();
}

ExperimentConfig profile_defaults(Profile profile) {
    ExperimentConfig exp;
    if (profile == Profile::paper) {
        exp.pfa = 1e-4;
        exp.trials_cal = 1000000;
        exp.trials_pd = 10000;
        exp.trials_pfa = 1000000;
    }
    for (double s = -30.0; s <= 30.0 + 1e-9; s += 2.0) {
        exp.sinr_grid.push_back(s);
    }
    return exp;
}

double threshold_from_statistics(std::vector<double> statistics, double pfa) {
    if (!(pfa > 0.0 && pfa < 1.0)) {
        throw std::invalid_argument("threshold: pfa must lie in (0, 1)");
    }
    const long total = static_cast<long>(statistics.size());
    // rank ceil((1 - pfa) T), computed without the rounding error of 1 - pfa
    const long rank = total - static_cast<long>(std::floor(pfa * static_cast<double>(total) + 1e-9));
    if (rank < 1) {
        throw std::invalid_argument("threshold: too few statistics for the requested pfa");
    }
    for (double s : statistics) {
        if (!std::isfinite(s)) {
            throw NumericalError("threshold: non-finite detector statistic");
        }
    }
    auto kth = statistics.begin() + (rank - 1);
    std::nth_element(statistics.begin(), kth, statistics.end());
    return *kth;
}

double ThresholdTable::at(const DetectorSpec& spec) const {
    const auto it = table_.find(spec.threshold_key());
    if (it == table_.end()) {
        throw std::out_of_range("no threshold for " + spec.threshold_key());
    }
    return it->second;
}

ThresholdTable calibrate_thresholds(std::span<const DetectorSpec> detectors, const ModelConfig& model,
                                    const ExperimentConfig& exp, const ExecutionPolicy& policy) {
    exp.validate();
    std::vector<DetectorSpec> unique;
    for (const auto& d : detectors) {
        if (std::none_of(unique.begin(), unique.end(),
                         [&](const DetectorSpec& u) { return u.threshold_key() == d.threshold_key(); })) {
            unique.push_back(d);
        }
    }
    const std::vector<double> stats = run_statistics(unique, model, exp, Hypothesis::h0, 0.0, Stream::calibration,
                                                     0, exp.trials_cal, policy);
    ThresholdTable table;
    const std::size_t nd = unique.size();
    for (std::size_t d = 0; d < nd; ++d) {
        std::vector<double> column(static_cast<std::size_t>(exp.trials_cal));
        for (long t = 0; t < exp.trials_cal; ++t) {
            column[static_cast<std::size_t>(t)] = stats[static_cast<std::size_t>(t) * nd + d];
        }
        table.set(unique[d], threshold_from_statistics(std::move(column), exp.pfa));
    }
    return table;
}

double calibrate_threshold(const DetectorSpec& detector, const ModelConfig& model, const ExperimentConfig& exp,
                           const ExecutionPolicy& policy) {
    const DetectorSpec one[] = {detector};
    return calibrate_thresholds(one, model, exp, policy).at(detector);
}

double binomial_std_error(double p, long trials) {
    if (trials < 1) {
        return 0.0;
    }
    return std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(trials));
}

std::vector<CurvePoint> pd_curve(std::span<const DetectorSpec> detectors, const ThresholdTable& thresholds,
                                 const ModelConfig& model, const ExperimentConfig& exp,
                                 const ExecutionPolicy& policy) {
    exp.validate();
    require_thresholds(detectors, thresholds);
    std::vector<CurvePoint> out;
    for (std::size_t i = 0; i < exp.sinr_grid.size(); ++i) {
        const double sinr = exp.sinr_grid[i];
        const auto stats = run_statistics(detectors, model, exp, Hypothesis::h1, sinr, Stream::detection, i,
                                          exp.trials_pd, policy);
        auto pts = exceedances(detectors, thresholds, stats, exp.trials_pd, sinr, exp.master_seed);
        out.insert(out.end(), pts.begin(), pts.end());
    }
    return out;
}

std::vector<CurvePoint> estimate_pfa(std::span<const DetectorSpec> detectors, const ThresholdTable& thresholds,
                                     const ModelConfig& model, const ExperimentConfig& exp, long trials, double x,
                                     const ExecutionPolicy& policy) {
    require_thresholds(detectors, thresholds);
    if (trials < 1) {
        throw std::invalid_argument("estimate_pfa: trial count must be positive");
    }
    const auto stats =
        run_statistics(detectors, model, exp, Hypothesis::h0, 0.0, Stream::false_alarm, 0, trials, policy);
    return exceedances(detectors, thresholds, stats, trials, x, exp.master_seed);
}

std::vector<CurvePoint> cfar_sweep(std::span<const DetectorSpec> detectors, const ThresholdTable& thresholds,
                                   CfarAxis axis, std::span<const double> values, const ModelConfig& model,
                                   const ExperimentConfig& exp, const ExecutionPolicy& policy) {
    exp.validate();
    require_thresholds(detectors, thresholds);
    std::vector<CurvePoint> out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        ModelConfig point_model = model;
        if (axis == CfarAxis::cnr) {
            point_model.cnr_db = values[i];
        } else {
            point_model.rho = values[i];
        }
        const auto stats = run_statistics(detectors, point_model, exp, Hypothesis::h0, 0.0, Stream::false_alarm, i,
                                          exp.trials_pfa, policy);
        auto pts = exceedances(detectors, thresholds, stats, exp.trials_pfa, values[i], exp.master_seed);
        out.insert(out.end(), pts.begin(), pts.end());
    }
    return out;
}

double rmse(std::span<const int> estimates, int truth) {
    if (estimates.empty()) {
        throw std::invalid_argument("rmse: no estimates");
    }
    double acc = 0.0;
    for (int e : estimates) {
        const double d = static_cast<double>(e - truth);
        acc += d * d;
    }
    return std::sqrt(acc / static_cast<double>(estimates.size()));
}

std::vector<RmsePoint> rmse_nm(std::span<const DetectorSpec> detectors, const ModelConfig& model,
                               const ExperimentConfig& exp, const ExecutionPolicy& policy) {
    exp.validate();
    model.validate();
    for (const auto& d : detectors) {
        if (d.is_baseline()) {
            throw std::invalid_argument("rmse: " + d.name() + " does not estimate (n, m)");
        }
    }
    const TrialSetup setup(model);
    const std::size_t nd = detectors.size();
    const long trials = exp.trials_pd;
    std::vector<RmsePoint> out;
    for (std::size_t i = 0; i < exp.sinr_grid.size(); ++i) {
        const double sinr = exp.sinr_grid[i];
        const TargetParams target = setup.target(sinr, model.alpha_ratio);
        std::vector<int> n_hat(static_cast<std::size_t>(trials) * nd);
        std::vector<int> m_hat(n_hat.size());
        for_each_trial(trials, policy, [&](long t) {
            const DataSet data =
                synthesize(Hypothesis::h1, target, setup.m_factor, setup.steering, model.primary_cells,
                           model.secondary_cells, derive_seed(exp.master_seed, Stream::rmse, i, t));
            DetectionWorkspace ws(data, setup.steering);
            for (std::size_t d = 0; d < nd; ++d) {
                const DetectionOutcome o = ws.evaluate(detectors[d], exp.cglrt);
                n_hat[static_cast<std::size_t>(t) * nd + d] = o.n_hat.value();
                m_hat[static_cast<std::size_t>(t) * nd + d] = o.m_hat.value();
            }
        });
        for (std::size_t d = 0; d < nd; ++d) {
            std::vector<int> ns(static_cast<std::size_t>(trials));
            std::vector<int> ms(ns.size());
            for (long t = 0; t < trials; ++t) {
                ns[static_cast<std::size_t>(t)] = n_hat[static_cast<std::size_t>(t) * nd + d];
                ms[static_cast<std::size_t>(t)] = m_hat[static_cast<std::size_t>(t) * nd + d];
            }
            out.push_back({detectors[d].name(), sinr, rmse(ns, setup.layout.n), rmse(ms, setup.layout.m), trials,
                           exp.master_seed});
        }
    }
    return out;
}

ConvergenceResult convergence_study(const ModelConfig& model, const ExperimentConfig& exp,
                                    std::span<const std::pair<int, int>> pairs, double sinr_db, long trials,
                                    const ExecutionPolicy& policy) {
    exp.cglrt.validate();
    model.validate();
    if (trials < 1 || pairs.empty()) {
        throw std::invalid_argument("convergence_study: need at least one trial and one pair");
    }
    for (const auto& [n, m] : pairs) {
        if (!(1 < n && n < m && m <= model.primary_cells)) {
            throw std::invalid_argument("convergence_study: pairs must satisfy 1 < n < m <= K_P");
        }
    }
    const TrialSetup setup(model);
    const TargetParams target = setup.target(sinr_db, model.alpha_ratio);
    const std::size_t np = pairs.size();
    const std::size_t hm = static_cast<std::size_t>(exp.cglrt.h_max);
    std::vector<double> gains(static_cast<std::size_t>(trials) * np * hm);
    std::vector<int> violations(static_cast<std::size_t>(trials) * np);
    for_each_trial(trials, policy, [&](long t) {
        const DataSet data = synthesize(Hypothesis::h1, target, setup.m_factor, setup.steering, model.primary_cells,
                                        model.secondary_cells,
                                        derive_seed(exp.master_seed, Stream::convergence, 0, t));
        DetectionWorkspace ws(data, setup.steering);
        for (std::size_t p = 0; p < np; ++p) {
            const CGlrtTrace tr = ws.c_glrt_trace(pairs[p].first, pairs[p].second, exp.cglrt, false);
            const std::size_t base = (static_cast<std::size_t>(t) * np + p) * hm;
            std::copy(tr.gains.begin(), tr.gains.end(), gains.begin() + static_cast<std::ptrdiff_t>(base));
            violations[static_cast<std::size_t>(t) * np + p] = tr.monotonic_violations;
        }
    });

    ConvergenceResult out;
    out.trials = trials;
    out.updates = trials * static_cast<long>(np) * 3 * exp.cglrt.h_max;
    for (int v : violations) {
        out.violations += v;
    }
    for (std::size_t p = 0; p < np; ++p) {
        ConvergenceTrace tr{pairs[p].first, pairs[p].second, std::vector<double>(hm, 0.0)};
        for (long t = 0; t < trials; ++t) {
            const std::size_t base = (static_cast<std::size_t>(t) * np + p) * hm;
            for (std::size_t h = 0; h < hm; ++h) {
                tr.mean_gain[h] += gains[base + h];
            }
        }
        for (double& g : tr.mean_gain) {
            g /= static_cast<double>(trials);
        }
        out.traces.push_back(std::move(tr));
    }
    return out;
}

std::vector<CurvePoint> sliding_window(std::span<const DetectorSpec> detectors, const ThresholdTable& thresholds,
                                       const ModelConfig& model, const ExperimentConfig& exp, int total_bins,
                                       double sinr_db, const ExecutionPolicy& policy) {
    exp.validate();
    model.validate();
    require_thresholds(detectors, thresholds);
    const TrialSetup setup(model);
    if (total_bins < model.primary_cells || total_bins < setup.layout.m) {
        throw std::invalid_argument("sliding_window: range extent smaller than the window or the echo bins");
    }
    // echoes at absolute bins 1, n, m of the full range extent
    TargetParams target = setup.target(sinr_db, model.alpha_ratio);
    target.layout.window_size = total_bins;

    const std::size_t nd = detectors.size();
    const long trials = exp.trials_pd;
    std::vector<CurvePoint> out;
    for (int first = 1; first + model.primary_cells - 1 <= total_bins; ++first) {
        std::vector<double> stats(static_cast<std::size_t>(trials) * nd);
        for_each_trial(trials, policy, [&](long t) {
            const DataSet full = synthesize(
                Hypothesis::h1, target, setup.m_factor, setup.steering, total_bins, model.secondary_cells,
                derive_seed(exp.master_seed, Stream::sliding_window, static_cast<std::uint64_t>(first), t));
            const DataSet window = window_slice(full, first, model.primary_cells);
            DetectionWorkspace ws(window, setup.steering);
            for (std::size_t d = 0; d < nd; ++d) {
                stats[static_cast<std::size_t>(t) * nd + d] = ws.evaluate(detectors[d], exp.cglrt).statistic;
            }
        });
        auto pts = exceedances(detectors, thresholds, stats, trials, first, exp.master_seed);
        out.insert(out.end(), pts.begin(), pts.end());
    }
    return out;
}

std::optional<double> crossing(std::span<const CurvePoint> curve, double level) {
    for (std::size_t i = 0; i < curve.size(); ++i) {
        if (curve[i].estimate >= level) {
            if (i == 0) {
                return curve[0].x;
            }
            const CurvePoint& a = curve[i - 1];
            const CurvePoint& b = curve[i];
            const double w = (level - a.estimate) / (b.estimate - a.estimate);
            return a.x + w * (b.x - a.x);
        }
    }
    return std::nullopt;
}

std::vector<CurvePoint> select(std::span<const CurvePoint> curve, const std::string& detector) {
    std::vector<CurvePoint> out;
    for (const auto& p : curve) {
        if (p.detector == detector) {
            out.push_back(p);
        }
    }
    return out;
}

} // namespace risdet
