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

#include "risdet/geometry.hpp"
#include "risdet/hermitian.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>

namespace risdet {

/// Uniform linear array with half-wavelength spacing: entry k is exp(j pi k sin(theta)).
CVector steering_vector(double theta_deg, std::size_t n);

/// Signatures of the three echoes as seen by the radar array.
///   v_r  : monostatic line of sight (bin 1)
///   v_sr : single-bounce composite, v_s + v_r in the spatial-only setting (bin n)
///   v_s  : RIS direction, double bounce (bin m)
struct SteeringSet {
    CVector v_r;
    CVector v_s;
    CVector v_sr;

    std::size_t dim() const noexcept { return v_r.size(); }
};

/// Builds v_sr = v_s + v_r after checking both inputs have unit-modulus entries.
SteeringSet make_steering_set(CVector v_r, CVector v_s);

SteeringSet spatial_steering(double theta_r_deg, double theta_s_deg, std::size_t n);

/// Non-empty when v_sr is numerically parallel to v_r or v_s (the signature matrix is then
/// column-rank deficient). The detectors still work; callers may want to report it.
std::optional<std::string> steering_rank_warning(const SteeringSet& s);

struct CovarianceModel {
    double noise_power = 1.0;
    double clutter_power = 0.0;
    double rho = 0.0; // one-lag correlation, [0, 1)
    std::size_t dim = 0;

    static CovarianceModel from_cnr(double cnr_db, double rho, std::size_t dim, double noise_power = 1.0);
};

/// M(i, j) = noise_power [i == j] + clutter_power rho^|i - j|
CMatrix build_covariance(const CovarianceModel& model);

struct TargetParams {
    std::array<cplx, 3> alpha{}; // (alpha_1, alpha_n, alpha_m)
    BinLayout layout;
};

/// alpha_1 real positive with |alpha_1|^2 v_r^H M^{-1} v_r equal to the requested SINR;
/// alpha_n = alpha_m = ratio * alpha_1.
std::array<cplx, 3> alpha_from_sinr(double sinr_db, const CMatrix& m, std::span<const cplx> v_r,
                                    double ratio = 10.0);

/// |alpha_1|^2 v_r^H M^{-1} v_r (linear).
double monostatic_sinr(cplx alpha_1, const CMatrix& m, std::span<const cplx> v_r);

/// Primary window Z_P (N x K_P) and target-free training data R (N x K_S).
struct DataSet {
    CMatrix primary;
    CMatrix secondary;

    std::size_t dim() const noexcept { return primary.rows(); }
    std::size_t primary_cells() const noexcept { return primary.cols(); }
    std::size_t secondary_cells() const noexcept { return secondary.cols(); }
};

enum class Hypothesis { h0, h1 };

/// Draws every column as mean + L u, u standard circular complex normal. Under H1 the means
/// are alpha_1 v_r, alpha_n v_sr and alpha_m v_s in bins 1, n and m. Deterministic in `seed`.
DataSet synthesize(Hypothesis hyp, const TargetParams& target, const HermitianFactor& m_factor,
                   const SteeringSet& steering, int primary_cells, int secondary_cells, std::uint64_t seed);

DataSet synthesize(Hypothesis hyp, const TargetParams& target, const CMatrix& m, const SteeringSet& steering,
                   int primary_cells, int secondary_cells, std::uint64_t seed);

/// Columns [first, first + count) of the primary window, same training data. `first` is 1-based.
DataSet window_slice(const DataSet& data, int first, int count);

} // namespace risdet
