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

#include "risdet/hermitian.hpp"

#include <algorithm>
#include <cmath>

namespace risdet {

namespace {

constexpr double kHermitianTolerance = 1e-10;
// Pivots at or below this fraction of the largest diagonal entry are treated as zero.
constexpr double kPivotTolerance = 1e-13;

void require_square(const CMatrix& a, const char* what) {
    if (a.rows() != a.cols() || a.rows() == 0) {
        throw std::invalid_argument(std::string(what) + ": matrix must be square and non-empty");
    }
}

} // namespace

CMatrix CMatrix::identity(std::size_t n) {
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

CMatrix CMatrix::from_columns(std::span<const CVector> columns) {
    if (columns.empty()) {
        return {};
    }
    const std::size_t rows = columns.front().size();
    CMatrix m(rows, columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) {
        if (columns[j].size() != rows) {
            throw std::invalid_argument("CMatrix::from_columns: ragged columns");
        }
        std::copy(columns[j].begin(), columns[j].end(), m.col(j).begin());
    }
    return m;
}

CMatrix CMatrix::adjoint() const {
    CMatrix t(cols_, rows_);
    for (std::size_t j = 0; j < cols_; ++j) {
        for (std::size_t i = 0; i < rows_; ++i) {
            t(j, i) = std::conj((*this)(i, j));
        }
    }
    return t;
}

CMatrix& CMatrix::operator*=(double s) {
    for (auto& x : data_) {
        x *= s;
    }
    return *this;
}

CMatrix& CMatrix::operator+=(const CMatrix& other) {
    if (other.rows_ != rows_ || other.cols_ != cols_) {
        throw std::invalid_argument("CMatrix::operator+=: dimension mismatch");
    }
    for (std::size_t k = 0; k < data_.size(); ++k) {
        data_[k] += other.data_[k];
    }
    return *this;
}

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
    if (a.cols() != b.rows()) {
        throw std::invalid_argument("CMatrix product: dimension mismatch");
    }
    CMatrix c(a.rows(), b.cols());
    for (std::size_t j = 0; j < b.cols(); ++j) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const cplx bkj = b(k, j);
            for (std::size_t i = 0; i < a.rows(); ++i) {
                c(i, j) += a(i, k) * bkj;
            }
        }
    }
    return c;
}

cplx dot(std::span<const cplx> a, std::span<const cplx> b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("dot: length mismatch");
    }
    double re = 0.0;
    double im = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        // conj(a) * b, spelled out to keep the loop free of complex-multiply NaN checks
        re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
        im += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
    }
    return {re, im};
}

void add_outer(CMatrix& s, std::span<const cplx> z) {
    const std::size_t n = z.size();
    if (s.rows() != n || s.cols() != n) {
        throw std::invalid_argument("add_outer: dimension mismatch");
    }
    for (std::size_t j = 0; j < n; ++j) {
        const cplx zj = std::conj(z[j]);
        auto col = s.col(j);
        for (std::size_t i = 0; i < n; ++i) {
            col[i] += z[i] * zj;
        }
    }
}

CMatrix outer_sum(const CMatrix& z) {
    CMatrix s(z.rows(), z.rows());
    for (std::size_t k = 0; k < z.cols(); ++k) {
        add_outer(s, z.col(k));
    }
    return s;
}

CMatrix HermitianFactor::reconstruct() const {
    return lower_ * lower_.adjoint();
}

HermitianFactor cholesky(const CMatrix& a) {
    require_square(a, "cholesky");
    const std::size_t n = a.rows();

    double scale = 0.0;
    double asym = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            scale = std::max(scale, std::abs(a(i, j)));
            asym = std::max(asym, std::abs(a(i, j) - std::conj(a(j, i))));
        }
    }
    if (!std::isfinite(scale)) {
        throw NotPositiveDefinite("cholesky: non-finite matrix entries");
    }
    if (asym > kHermitianTolerance * scale) {
        throw std::invalid_argument("cholesky: matrix is not Hermitian");
    }

    double max_diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        max_diag = std::max(max_diag, a(i, i).real());
    }

    CMatrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        // lower triangle of (A + A^H)/2
        for (std::size_t i = j; i < n; ++i) {
            l(i, j) = 0.5 * (a(i, j) + std::conj(a(j, i)));
        }
    }

    for (std::size_t j = 0; j < n; ++j) {
        double d = l(j, j).real();
        for (std::size_t k = 0; k < j; ++k) {
            d -= std::norm(l(j, k));
        }
        if (!(d > kPivotTolerance * max_diag)) {
            throw NotPositiveDefinite("cholesky: matrix is not positive definite (pivot " +
                                      std::to_string(j) + ")");
        }
        const double ljj = std::sqrt(d);
        l(j, j) = ljj;
        for (std::size_t k = 0; k < j; ++k) {
            const cplx ljk = std::conj(l(j, k));
            for (std::size_t i = j + 1; i < n; ++i) {
                l(i, j) -= l(i, k) * ljk;
            }
        }
        const double inv = 1.0 / ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            l(i, j) *= inv;
        }
    }
    return HermitianFactor(std::move(l));
}

double logdet(const HermitianFactor& f) {
    double s = 0.0;
    for (std::size_t k = 0; k < f.dim(); ++k) {
        s += std::log(f.lower()(k, k).real());
    }
    return 2.0 * s;
}

namespace {

void forward_in_place(const CMatrix& l, std::span<cplx> x) {
    const std::size_t n = l.rows();
    for (std::size_t i = 0; i < n; ++i) {
        cplx s = x[i];
        for (std::size_t k = 0; k < i; ++k) {
            s -= l(i, k) * x[k];
        }
        x[i] = s / l(i, i).real();
    }
}

void backward_adjoint_in_place(const CMatrix& l, std::span<cplx> x) {
    const std::size_t n = l.rows();
    for (std::size_t ii = n; ii-- > 0;) {
        cplx s = x[ii];
        for (std::size_t k = ii + 1; k < n; ++k) {
            s -= std::conj(l(k, ii)) * x[k];
        }
        x[ii] = s / l(ii, ii).real();
    }
}

void require_length(const HermitianFactor& f, std::size_t len, const char* what) {
    if (len != f.dim()) {
        throw std::invalid_argument(std::string(what) + ": dimension mismatch");
    }
}

} // namespace

CVector whiten(const HermitianFactor& f, std::span<const cplx> b) {
    require_length(f, b.size(), "whiten");
    CVector x(b.begin(), b.end());
    forward_in_place(f.lower(), x);
    return x;
}

CMatrix whiten(const HermitianFactor& f, const CMatrix& b) {
    require_length(f, b.rows(), "whiten");
    CMatrix x = b;
    for (std::size_t j = 0; j < x.cols(); ++j) {
        forward_in_place(f.lower(), x.col(j));
    }
    return x;
}

CVector solve(const HermitianFactor& f, std::span<const cplx> b) {
    CVector x = whiten(f, b);
    backward_adjoint_in_place(f.lower(), x);
    return x;
}

CMatrix solve(const HermitianFactor& f, const CMatrix& b) {
    CMatrix x = whiten(f, b);
    for (std::size_t j = 0; j < x.cols(); ++j) {
        backward_adjoint_in_place(f.lower(), x.col(j));
    }
    return x;
}

cplx quad_form(std::span<const cplx> v, const HermitianFactor& f, std::span<const cplx> z) {
    require_length(f, v.size(), "quad_form");
    require_length(f, z.size(), "quad_form");
    const CVector wv = whiten(f, v);
    const CVector wz = whiten(f, z);
    return dot(wv, wz);
}

} // namespace risdet
