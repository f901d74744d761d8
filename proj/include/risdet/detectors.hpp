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

#include "risdet/hermitian.hpp"
#include "risdet/signal_model.hpp"

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace risdet {

enum class DetectorKind {
    ep_glrt_km_1, // estimate-and-plug, known M, S_S plugged
    ep_glrt_km_2, // estimate-and-plug, known M, S_{n,m} plugged
    ep_glrt_ka,   // estimate-and-plug, known alpha
    c_glrt,       // cyclic optimization
    a_glrt,       // trace upper bound (approximate GLRT)
    kelly,        // single-cell baseline
    amf,          // single-cell baseline
};

enum class SteeringChoice { v_r, v_sr, v_s };

/// A detector plus, for the single-cell baselines, the cell it is fed and the steering
/// vector it assumes. Names: "A-GLRT", "KELLY" (cell 1, v_r), "AMF@3", "KELLY@6/S".
struct DetectorSpec {
    DetectorKind kind = DetectorKind::a_glrt;
    int cell = 1;
    SteeringChoice steering = SteeringChoice::v_r;

    bool is_baseline() const noexcept { return kind == DetectorKind::kelly || kind == DetectorKind::amf; }
    /// True for the statistics defined as a ratio of determinants.
    bool is_det_ratio() const noexcept {
        return kind == DetectorKind::ep_glrt_ka || kind == DetectorKind::c_glrt || kind == DetectorKind::a_glrt;
    }
    std::string name() const;
    /// Baselines fed by different cells share one threshold (same H0 distribution).
    std::string threshold_key() const;

    friend bool operator==(const DetectorSpec&, const DetectorSpec&) = default;
};

/// Throws std::invalid_argument for unknown names.
DetectorSpec parse_detector(std::string_view name);
std::string_view kind_name(DetectorKind kind);

/// EP-GLRT-KM-1, EP-GLRT-KM-2, EP-GLRT-KA, C-GLRT, A-GLRT
std::vector<DetectorSpec> proposed_detectors();

struct DetectionOutcome {
    double statistic = 0.0;
    std::optional<int> n_hat; // absent for the baselines
    std::optional<int> m_hat;
    int iterations = 0;       // C-GLRT only: iterations run at the maximizing pair
};

struct CGlrtConfig {
    double epsilon = 1e-5;
    int h_max = 20;

    void validate() const;
};

/// The cyclic estimator produced a decreasing likelihood, which the coordinate updates
/// can only do through a numerical fault.
class NonMonotonic : public NumericalError {
  public:
    using NumericalError::NumericalError;
};

/// All (n, m) with 1 < n < m <= K_P in lexicographic order.
std::vector<std::pair<int, int>> enumerate_pairs(int primary_cells);

/// v^H W^{-1} z / v^H W^{-1} v
cplx alpha_hat(std::span<const cplx> v, const HermitianFactor& w, std::span<const cplx> z);

DetectionOutcome ep_glrt_km(const DataSet& data, const SteeringSet& steering, int variant);
DetectionOutcome ep_glrt_ka(const DataSet& data, const SteeringSet& steering);
DetectionOutcome c_glrt(const DataSet& data, const SteeringSet& steering, const CGlrtConfig& cfg = {});
DetectionOutcome a_glrt(const DataSet& data, const SteeringSet& steering);

/// |v^H S^{-1} z|^2 / [(v^H S^{-1} v)(1 + z^H S^{-1} z)], S = R R^H
double kelly(std::span<const cplx> z, const CMatrix& secondary, std::span<const cplx> v);
/// |v^H S^{-1} z|^2 / (v^H S^{-1} v), S = R R^H
double amf(std::span<const cplx> z, const CMatrix& secondary, std::span<const cplx> v);

/// History of the cyclic estimator at one (n, m).
struct CGlrtTrace {
    std::vector<double> gains;   // relative likelihood gain after iterations 1..h
    std::vector<double> objective; // log det(S_nm + Y Y^H) after init and after every update
    int iterations = 0;
    int monotonic_violations = 0;
    std::array<cplx, 3> alpha{};
    double log_statistic = 0.0;
};

/// Per-trial cache shared by all detectors evaluated on the same data: the training
/// factor, log det(S_P + S_S), and for each candidate pair the factor of S_{n,m} together
/// with the Gram matrix of [z_1, z_n, z_m, v_r, v_sr, v_s] in the S_{n,m}^{-1} metric.
/// Every statistic is then evaluated on those small Gram matrices.
class DetectionWorkspace {
  public:
    DetectionWorkspace(const DataSet& data, const SteeringSet& steering);
    // the workspace keeps references; temporaries would dangle
    DetectionWorkspace(DataSet&&, const SteeringSet&) = delete;
    DetectionWorkspace(const DataSet&, SteeringSet&&) = delete;
    DetectionWorkspace(DataSet&&, SteeringSet&&) = delete;

    DetectionOutcome evaluate(const DetectorSpec& spec, const CGlrtConfig& cfg = {});

    /// Cyclic estimator at a fixed pair. With stop_early == false all h_max iterations run.
    CGlrtTrace c_glrt_trace(int n, int m, const CGlrtConfig& cfg, bool stop_early = true);

    /// max over pairs of det(S_P + S_S) / det(S_{n,m})
    double det_ratio_bound();
    /// z_1^H S_S^{-1} z_1 + max over pairs of (z_n^H S_S^{-1} z_n + z_m^H S_S^{-1} z_m)
    double km1_bound();

    int primary_cells() const noexcept { return kp_; }

  private:
    struct PairStats {
        int n = 0;
        int m = 0;
        double logdet = 0.0; // log det S_{n,m}
        CMatrix gram;        // 6 x 6
    };

    void ensure_secondary();
    void ensure_pairs();
    double logdet_total();

    DetectionOutcome km(bool pair_plug);
    DetectionOutcome det_ratio(DetectorKind kind, const CGlrtConfig& cfg);
    double baseline(const DetectorSpec& spec);
    CGlrtTrace cyclic(const PairStats& p, const CGlrtConfig& cfg, bool stop_early) const;

    const DataSet& data_;
    const SteeringSet& steering_;
    int kp_ = 0;
    int n_total_ = 0; // K_P + K_S

    std::optional<CMatrix> training_scatter_; // S_S
    std::optional<CMatrix> secondary_gram_;   // [z_1..z_KP, v_r, v_sr, v_s] in S_S^{-1}
    std::optional<double> logdet_total_;
    std::vector<PairStats> pairs_;
};

DetectionOutcome evaluate(const DetectorSpec& spec, const DataSet& data, const SteeringSet& steering,
                          const CGlrtConfig& cfg = {});

} // namespace risdet
