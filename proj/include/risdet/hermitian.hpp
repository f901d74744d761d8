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

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace risdet {

using cplx = std::complex<double>;
using CVector = std::vector<cplx>;

/// Base class for failures of the numerical kernels (CLI exit status 3).
class NumericalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Raised when a matrix handed to cholesky() is not (numerically) positive definite.
/// In the detectors this usually means a rank-deficient sample covariance (K_S < N).
class NotPositiveDefinite : public NumericalError {
  public:
    using NumericalError::NumericalError;
};

/// Dense complex matrix, column-major. Columns are contiguous, which is what every
/// kernel here iterates over (data snapshots, steering vectors).
class CMatrix {
  public:
    CMatrix() = default;
    CMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    static CMatrix identity(std::size_t n);
    static CMatrix from_columns(std::span<const CVector> columns);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    cplx& operator()(std::size_t i, std::size_t j) { return data_[j * rows_ + i]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return data_[j * rows_ + i]; }

    std::span<cplx> col(std::size_t j) { return {data_.data() + j * rows_, rows_}; }
    std::span<const cplx> col(std::size_t j) const { return {data_.data() + j * rows_, rows_}; }

    CMatrix adjoint() const;
    CMatrix& operator*=(double s);
    CMatrix& operator+=(const CMatrix& other);

    std::span<const cplx> data() const noexcept { return data_; }

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> data_;
};

CMatrix operator*(const CMatrix& a, const CMatrix& b);

/// a^H b
cplx dot(std::span<const cplx> a, std::span<const cplx> b);

/// S += z z^H (only valid for square S with rows == z.size()).
void add_outer(CMatrix& s, std::span<const cplx> z);

/// Z Z^H
CMatrix outer_sum(const CMatrix& z);

/// Lower-triangular factor L of a positive definite Hermitian matrix, A = L L^H.
class HermitianFactor {
  public:
    explicit HermitianFactor(CMatrix lower) : lower_(std::move(lower)) {}

    std::size_t dim() const noexcept { return lower_.rows(); }
    const CMatrix& lower() const noexcept { return lower_; }

    /// L L^H
    CMatrix reconstruct() const;

  private:
    CMatrix lower_;
};

/// Cholesky factorization. The input must be Hermitian to 1e-10 relative; it is
/// symmetrized by averaging A and A^H before factoring.
HermitianFactor cholesky(const CMatrix& a);

double logdet(const HermitianFactor& f);

/// x = A^{-1} b
CVector solve(const HermitianFactor& f, std::span<const cplx> b);
CMatrix solve(const HermitianFactor& f, const CMatrix& b);

/// y = L^{-1} b. Gram products of whitened vectors give b_i^H A^{-1} b_j.
CVector whiten(const HermitianFactor& f, std::span<const cplx> b);
CMatrix whiten(const HermitianFactor& f, const CMatrix& b);

/// v^H A^{-1} z
cplx quad_form(std::span<const cplx> v, const HermitianFactor& f, std::span<const cplx> z);

} // namespace risdet
