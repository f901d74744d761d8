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

#include "risdet/signal_model.hpp"

#include "risdet/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace risdet {

CVector steering_vector(double theta_deg, std::size_t n) {
    if (n == 0) {
        throw std::invalid_argument("steering_vector: N must be at least 1");
    }
    const double phase = std::numbers::pi * std::sin(theta_deg * std::numbers::pi / 180.0);
    CVector v(n);
    for (std::size_t k = 0; k < n; ++k) {
        v[k] = std::polar(1.0, phase * static_cast<double>(k));
    }
    return v;
}

SteeringSet make_steering_set(CVector v_r, CVector v_s) {
    if (v_r.empty() || v_r.size() != v_s.size()) {
        throw std::invalid_argument("steering set: v_r and v_s must be non-empty and of equal length");
    }
    auto unit_modulus = [](const CVector& v) {
        return std::all_of(v.begin(), v.end(), [](cplx x) { return std::abs(std::abs(x) - 1.0) < 1e-9; });
    };
    if (!unit_modulus(v_r) || !unit_modulus(v_s)) {
        throw std::invalid_argument("steering set: entries of v_r and v_s must have unit magnitude");
    }
    CVector v_sr(v_r.size());
    for (std::size_t k = 0; k < v_r.size(); ++k) {
        v_sr[k] = v_s[k] + v_r[k];
    }
    return SteeringSet{std::move(v_r), std::move(v_s), std::move(v_sr)};
}

SteeringSet spatial_steering(double theta_r_deg, double theta_s_deg, std::size_t n) {
    return make_steering_set(steering_vector(theta_r_deg, n), steering_vector(theta_s_deg, n));
}

std::optional<std::string> steering_rank_warning(const SteeringSet& s) {
    auto parallel = [](const CVector& a, const CVector& b) {
        const double num = std::norm(dot(a, b));
        const double den = std::real(dot(a, a)) * std::real(dot(b, b));
        return den > 0.0 && num >= (1.0 - 1e-9) * den;
    };
    if (parallel(s.v_sr, s.v_r) || parallel(s.v_sr, s.v_s)) {
        return std::string("v_sr is numerically parallel to v_r or v_s; the signature matrix "
                           "[v_r, v_sr, v_s] is not full column rank");
    }
    return std::nullopt;
}

CovarianceModel CovarianceModel::from_cnr(double cnr_db, double rho, std::size_t dim, double noise_power) {
    return CovarianceModel{
        .noise_power = noise_power,
        .clutter_power = noise_power * std::pow(10.0, cnr_db / 10.0),
        .rho = rho,
        .dim = dim,
    };
}

CMatrix build_covariance(const CovarianceModel& model) {
    if (model.dim == 0) {
        throw std::invalid_argument("build_covariance: dimension must be positive");
    }
    if (!(model.rho >= 0.0 && model.rho < 1.0)) {
        throw std::invalid_argument("build_covariance: rho must lie in [0, 1)");
    }
    if (!(model.noise_power >= 0.0) || !(model.clutter_power >= 0.0) ||
        !(model.noise_power + model.clutter_power > 0.0)) {
        throw std::invalid_argument("build_covariance: powers must be non-negative and not both zero");
    }
    const std::size_t n = model.dim;
    CMatrix m(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            const auto lag = static_cast<double>(i > j ? i - j : j - i);
            double v = model.clutter_power * std::pow(model.rho, lag);
            if (i == j) {
                v += model.noise_power;
            }
            m(i, j) = v;
        }
    }
    return m;
}

double monostatic_sinr(cplx alpha_1, const CMatrix& m, std::span<const cplx> v_r) {
    const HermitianFactor f = cholesky(m);
    return std::norm(alpha_1) * quad_form(v_r, f, v_r).real();
}

std::array<cplx, 3> alpha_from_sinr(double sinr_db, const CMatrix& m, std::span<const cplx> v_r, double ratio) {
    const HermitianFactor f = cholesky(m);
    const double gain = quad_form(v_r, f, v_r).real();
    const double a1 = std::sqrt(std::pow(10.0, sinr_db / 10.0) / gain);
    return {cplx(a1, 0.0), cplx(ratio * a1, 0.0), cplx(ratio * a1, 0.0)};
}

namespace {

// x = mean + L u, u ~ CN(0, I) drawn entrywise with real/imaginary variance 1/2
void colored_column(const CMatrix& l, std::span<cplx> out, TrialEngine& eng,
                    std::normal_distribution<double>& normal, CVector& u) {
    const std::size_t n = l.rows();
    for (std::size_t i = 0; i < n; ++i) {
        const double re = normal(eng);
        const double im = normal(eng);
        u[i] = cplx(re, im);
    }
    for (std::size_t i = 0; i < n; ++i) {
        cplx s = 0.0;
        for (std::size_t k = 0; k <= i; ++k) {
            s += l(i, k) * u[k];
        }
        out[i] += s;
    }
}

} // namespace

DataSet synthesize(Hypothesis hyp, const TargetParams& target, const HermitianFactor& m_factor,
                   const SteeringSet& steering, int primary_cells, int secondary_cells, std::uint64_t seed) {
    const std::size_t n = m_factor.dim();
    if (steering.dim() != n) {
        throw std::invalid_argument("synthesize: steering and covariance dimensions differ");
    }
    if (primary_cells < 1 || secondary_cells < 1) {
        throw std::invalid_argument("synthesize: window and training sizes must be positive");
    }
    DataSet data{CMatrix(n, static_cast<std::size_t>(primary_cells)),
                 CMatrix(n, static_cast<std::size_t>(secondary_cells))};

    if (hyp == Hypothesis::h1) {
        const BinLayout& lay = target.layout;
        if (!(1 < lay.n && lay.n < lay.m && lay.m <= primary_cells)) {
            throw std::invalid_argument("synthesize: target bins must satisfy 1 < n < m <= K_P");
        }
        auto place = [&](int bin, cplx a, const CVector& v) {
            auto col = data.primary.col(static_cast<std::size_t>(bin - 1));
            for (std::size_t i = 0; i < n; ++i) {
                col[i] = a * v[i];
            }
        };
        place(1, target.alpha[0], steering.v_r);
        place(lay.n, target.alpha[1], steering.v_sr);
        place(lay.m, target.alpha[2], steering.v_s);
    }

    TrialEngine eng(seed);
    std::normal_distribution<double> normal(0.0, std::numbers::sqrt2 / 2.0);
    CVector u(n);
    for (std::size_t k = 0; k < data.primary.cols(); ++k) {
        colored_column(m_factor.lower(), data.primary.col(k), eng, normal, u);
    }
    for (std::size_t k = 0; k < data.secondary.cols(); ++k) {
        colored_column(m_factor.lower(), data.secondary.col(k), eng, normal, u);
    }
    return data;
}

DataSet synthesize(Hypothesis hyp, const TargetParams& target, const CMatrix& m, const SteeringSet& steering,
                   int primary_cells, int secondary_cells, std::uint64_t seed) {
    return synthesize(hyp, target, cholesky(m), steering, primary_cells, secondary_cells, seed);
}

DataSet window_slice(const DataSet& data, int first, int count) {
    if (first < 1 || count < 1 || static_cast<std::size_t>(first - 1 + count) > data.primary_cells()) {
        throw std::invalid_argument("window_slice: window exceeds the primary data");
    }
    DataSet out{CMatrix(data.dim(), static_cast<std::size_t>(count)), data.secondary};
    for (int k = 0; k < count; ++k) {
        auto src = data.primary.col(static_cast<std::size_t>(first - 1 + k));
        std::copy(src.begin(), src.end(), out.primary.col(static_cast<std::size_t>(k)).begin());
    }
    return out;
}

} // namespace risdet
