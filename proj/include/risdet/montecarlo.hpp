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

#include "risdet/detectors.hpp"
#include "risdet/geometry.hpp"
#include "risdet/signal_model.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace risdet {

/// Array, window and interference parameters shared by every experiment.
struct ModelConfig {
    int n = 16;               // array elements
    int primary_cells = 6;    // K_P
    int secondary_cells = 24; // K_S
    double cnr_db = 25.0;
    double rho = 0.9;
    double noise_power = 1.0;
    double theta_r_deg = 0.5;  // radar-to-target direction
    double theta_s_deg = -0.4; // radar-to-surface direction
    double alpha_ratio = 10.0; // alpha_n = alpha_m = ratio * alpha_1
    ScenarioGeometry scenario = case_study_geometry();

    void validate() const;
    CMatrix covariance() const;
    SteeringSet steering() const;
    BinLayout layout() const;
};

struct ExperimentConfig {
    double pfa = 1e-3;
    long trials_cal = 100000;
    long trials_pd = 1000;
    long trials_pfa = 100000;
    std::vector<double> sinr_grid;
    std::uint64_t master_seed = 1;
    CGlrtConfig cglrt;

    /// pfa in (0, 1), trials_cal >= 10 / pfa, positive trial counts.
    void validate() const;
};

enum class Profile { desk, paper };

/// desk: pfa 1e-3, 1e5 calibration and 1e3 detection trials; paper: pfa 1e-4, 1e6 and 1e4.
ExperimentConfig profile_defaults(Profile profile);

struct ExecutionPolicy {
    bool parallel = true;
    int threads = 0; // 0: OpenMP default

    static ExecutionPolicy serial() { return {false, 1}; }
};

/// The order statistic of rank ceil((1 - pfa) T), so that "statistic > eta" holds for at
/// most floor(pfa T) of the calibration samples.
double threshold_from_statistics(std::vector<double> statistics, double pfa);

/// Thresholds keyed by DetectorSpec::threshold_key().
class ThresholdTable {
  public:
    void set(const DetectorSpec& spec, double eta) { table_[spec.threshold_key()] = eta; }
    double at(const DetectorSpec& spec) const;
    bool contains(const DetectorSpec& spec) const { return table_.count(spec.threshold_key()) != 0; }
    const std::map<std::string, double>& entries() const noexcept { return table_; }

  private:
    std::map<std::string, double> table_;
};

/// One H0 sweep of exp.trials_cal trials shared by all detectors.
ThresholdTable calibrate_thresholds(std::span<const DetectorSpec> detectors, const ModelConfig& model,
                                    const ExperimentConfig& exp, const ExecutionPolicy& policy = {});
double calibrate_threshold(const DetectorSpec& detector, const ModelConfig& model, const ExperimentConfig& exp,
                           const ExecutionPolicy& policy = {});

struct CurvePoint {
    std::string detector;
    double x = 0.0; // SINR dB, CNR dB, rho or window start, depending on the experiment
    double estimate = 0.0;
    double std_error = 0.0;
    long trials = 0;
    std::uint64_t seed = 0;
};

/// sqrt(p (1 - p) / trials)
double binomial_std_error(double p, long trials);

/// Empirical P_d over exp.sinr_grid, exp.trials_pd H1 trials per point.
std::vector<CurvePoint> pd_curve(std::span<const DetectorSpec> detectors, const ThresholdTable& thresholds,
                                 const ModelConfig& model, const ExperimentConfig& exp,
                                 const ExecutionPolicy& policy = {});

/// Empirical P_fa on `trials` fresh H0 trials; x is set to `x`.
std::vector<CurvePoint> estimate_pfa(std::span<const DetectorSpec> detectors, const ThresholdTable& thresholds,
                                     const ModelConfig& model, const ExperimentConfig& exp, long trials,
                                     double x = 0.0, const ExecutionPolicy& policy = {});

enum class CfarAxis { cnr, rho };

/// Empirical P_fa as CNR or rho varies with the thresholds held fixed.
std::vector<CurvePoint> cfar_sweep(std::span<const DetectorSpec> detectors, const ThresholdTable& thresholds,
                                   CfarAxis axis, std::span<const double> values, const ModelConfig& model,
                                   const ExperimentConfig& exp, const ExecutionPolicy& policy = {});

struct RmsePoint {
    std::string detector;
    double sinr_db = 0.0;
    double rmse_n = 0.0;
    double rmse_m = 0.0;
    long trials = 0;
    std::uint64_t seed = 0;
};

/// Root mean squared error of the (n, m) estimates of the proposed detectors over
/// exp.sinr_grid, exp.trials_pd trials per point.
std::vector<RmsePoint> rmse_nm(std::span<const DetectorSpec> detectors, const ModelConfig& model,
                               const ExperimentConfig& exp, const ExecutionPolicy& policy = {});

/// sqrt(mean((estimate - truth)^2))
double rmse(std::span<const int> estimates, int truth);

struct ConvergenceTrace {
    int n = 0;
    int m = 0;
    std::vector<double> mean_gain; // index h - 1
};

struct ConvergenceResult {
    std::vector<ConvergenceTrace> traces;
    long trials = 0;
    long updates = 0;    // coordinate updates checked
    long violations = 0; // of which decreased the likelihood
};

/// Cyclic estimator run for exactly exp.cglrt.h_max iterations at each listed pair on
/// `trials` H1 draws at SINR `sinr_db`.
ConvergenceResult convergence_study(const ModelConfig& model, const ExperimentConfig& exp,
                                    std::span<const std::pair<int, int>> pairs, double sinr_db, long trials,
                                    const ExecutionPolicy& policy = {});

/// P_d of a K_P-cell window slid over `total_bins` cells whose echoes sit at the absolute
/// bins of model.layout(); x is the 1-based first bin of the window. exp.trials_pd trials per position.
std::vector<CurvePoint> sliding_window(std::span<const DetectorSpec> detectors, const ThresholdTable& thresholds,
                                       const ModelConfig& model, const ExperimentConfig& exp, int total_bins,
                                       double sinr_db, const ExecutionPolicy& policy = {});

/// Smallest x at which a curve, linearly interpolated, reaches `level`. Points must be
/// sorted by x and belong to one detector.
std::optional<double> crossing(std::span<const CurvePoint> curve, double level);

/// Points of `curve` belonging to `detector`, in order.
std::vector<CurvePoint> select(std::span<const CurvePoint> curve, const std::string& detector);

} // namespace risdet
