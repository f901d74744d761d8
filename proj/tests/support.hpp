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

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace risdet::testing {

// Small generator set for the property tests.
class Gen {
  public:
    explicit Gen(std::uint64_t seed) : eng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }
    cplx cnormal() {
        std::normal_distribution<double> nd(0.0, std::numbers::sqrt2 / 2.0);
        const double re = nd(eng_);
        return {re, nd(eng_)};
    }
    cplx phase() { return std::polar(1.0, uniform(-std::numbers::pi, std::numbers::pi)); }

    CVector vector(std::size_t n, double scale = 1.0) {
        CVector v(n);
        for (auto& x : v) {
            x = scale * cnormal();
        }
        return v;
    }
    CMatrix matrix(std::size_t rows, std::size_t cols, double scale = 1.0) {
        CMatrix m(rows, cols);
        for (std::size_t j = 0; j < cols; ++j) {
            for (std::size_t i = 0; i < rows; ++i) {
                m(i, j) = scale * cnormal();
            }
        }
        return m;
    }
    // X X^H + n I, comfortably conditioned
    CMatrix pd(std::size_t n) {
        CMatrix a = outer_sum(matrix(n, n));
        for (std::size_t i = 0; i < n; ++i) {
            a(i, i) += static_cast<double>(n);
        }
        return a;
    }
    CVector unit_modulus(std::size_t n) {
        CVector v(n);
        for (auto& x : v) {
            x = phase();
        }
        return v;
    }
    SteeringSet steering(std::size_t n) { return make_steering_set(unit_modulus(n), unit_modulus(n)); }
    DataSet dataset(std::size_t n, std::size_t kp, std::size_t ks, double scale = 1.0) {
        return {matrix(n, kp, scale), matrix(n, ks, scale)};
    }

    std::mt19937_64& engine() { return eng_; }

  private:
    std::mt19937_64 eng_;
};

inline Eigen::MatrixXcd to_eigen(const CMatrix& m) {
    Eigen::MatrixXcd e(m.rows(), m.cols());
    for (std::size_t j = 0; j < m.cols(); ++j) {
        for (std::size_t i = 0; i < m.rows(); ++i) {
            e(i, j) = m(i, j);
        }
    }
    return e;
}

inline Eigen::VectorXcd to_eigen(std::span<const cplx> v) {
    Eigen::VectorXcd e(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        e(i) = v[i];
    }
    return e;
}

inline double rel_err(double a, double b) {
    return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

inline double rel_err(cplx a, cplx b) {
    return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

inline DataSet scaled(const DataSet& d, double gamma) {
    DataSet out = d;
    out.primary *= gamma;
    out.secondary *= gamma;
    return out;
}

} // namespace risdet::testing
