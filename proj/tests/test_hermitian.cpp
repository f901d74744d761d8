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

#include <catch2/catch_amalgamated.hpp>

#include "risdet/hermitian.hpp"
#include "support.hpp"

#include <cmath>

using namespace risdet;
using risdet::testing::Gen;
using risdet::testing::rel_err;
using risdet::testing::to_eigen;

TEST_CASE("cholesky: hand factorization of [[2,1],[1,2]]", "[hermitian]")
{
    CMatrix a(2, 2);
    a(0, 0) = 2.0;
    a(0, 1) = 1.0;
    a(1, 0) = 1.0;
    a(1, 1) = 2.0;
    const HermitianFactor f = cholesky(a);
    const CMatrix& l = f.lower();
    CHECK(std::abs(l(0, 0) - std::sqrt(2.0)) < 1e-15);
    CHECK(std::abs(l(1, 0) - 1.0 / std::sqrt(2.0)) < 1e-15);
    CHECK(std::abs(l(1, 1) - std::sqrt(1.5)) < 1e-15);
    CHECK(l(0, 1) == cplx(0.0));
}

TEST_CASE("cholesky: identity and diagonal cases", "[hermitian]")
{
    const HermitianFactor f = cholesky(CMatrix::identity(4));
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            CHECK(f.lower()(i, j) == cplx(i == j ? 1.0 : 0.0));
        }
    }
    CHECK(logdet(f) == 0.0);

    CMatrix d(2, 2);
    d(0, 0) = 2.0;
    d(1, 1) = 3.0;
    const HermitianFactor fd = cholesky(d);
    CHECK(std::abs(logdet(fd) - std::log(6.0)) < 1e-15);
    const CVector x = solve(fd, CVector{4.0, 9.0});
    CHECK(std::abs(x[0] - cplx(2.0)) < 1e-15);
    CHECK(std::abs(x[1] - cplx(3.0)) < 1e-15);
}

TEST_CASE("cholesky: rejects indefinite, singular and non-Hermitian input", "[hermitian]")
{
    CMatrix a(2, 2);
    a(0, 0) = 1.0;
    a(0, 1) = 2.0;
    a(1, 0) = 2.0;
    a(1, 1) = 1.0; // eigenvalues 3, -1
    CHECK_THROWS_AS(cholesky(a), NotPositiveDefinite);

    Gen g(11);
    // rank 3 scatter in dimension 5: K_S < N
    const CMatrix s = outer_sum(g.matrix(5, 3));
    CHECK_THROWS_AS(cholesky(s), NotPositiveDefinite);

    CMatrix h = g.pd(3);
    h(0, 1) += cplx(0.0, 1.0);
    CHECK_THROWS_AS(cholesky(h), std::invalid_argument);
    CHECK_THROWS_AS(cholesky(CMatrix(2, 3)), std::invalid_argument);
}

TEST_CASE("cholesky: reconstruction property on random Hermitian PD matrices", "[hermitian][property]")
{
    Gen g(1234);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = static_cast<std::size_t>(g.integer(1, 16));
        const CMatrix a = g.pd(n);
        const HermitianFactor f = cholesky(a);
        const CMatrix r = f.reconstruct();
        double err = 0.0;
        double scale = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t i = 0; i < n; ++i) {
                err = std::max(err, std::abs(r(i, j) - a(i, j)));
                scale = std::max(scale, std::abs(a(i, j)));
                if (i < j) {
                    REQUIRE(f.lower()(i, j) == cplx(0.0));
                }
            }
            REQUIRE(f.lower()(j, j).imag() == 0.0);
            REQUIRE(f.lower()(j, j).real() > 0.0);
        }
        CHECK(err <= 1e-12 * scale);
    }
}

TEST_CASE("logdet: random 8x8 PD against eigenvalue product", "[hermitian]")
{
    Gen g(7);
    for (int trial = 0; trial < 10; ++trial) {
        const CMatrix a = g.pd(8);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(to_eigen(a));
        const double oracle = es.eigenvalues().array().log().sum();
        CHECK(std::abs(logdet(cholesky(a)) - oracle) < 1e-10);
    }
}

TEST_CASE("solve: random PD at N = 4 against explicit inverse", "[hermitian]")
{
    Gen g(8);
    const CMatrix a = g.pd(4);
    const CVector b = g.vector(4);
    const Eigen::VectorXcd oracle = to_eigen(a).inverse() * to_eigen(b);
    const CVector x = solve(cholesky(a), b);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(std::abs(x[i] - oracle(static_cast<Eigen::Index>(i))) < 1e-12 * oracle.norm());
    }

    const CMatrix bm = g.matrix(4, 3);
    const Eigen::MatrixXcd om = to_eigen(a).inverse() * to_eigen(bm);
    const CMatrix xm = solve(cholesky(a), bm);
    for (std::size_t j = 0; j < 3; ++j) {
        for (std::size_t i = 0; i < 4; ++i) {
            CHECK(std::abs(xm(i, j) - om(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))) <
                  1e-12 * om.norm());
        }
    }

    const CVector same = solve(cholesky(CMatrix::identity(4)), b);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(same[i] == b[i]);
    }
}

TEST_CASE("quad_form: trivial cases and solve-then-dot oracle", "[hermitian]")
{
    const HermitianFactor eye = cholesky(CMatrix::identity(3));
    const CVector v{1.0, cplx(0.0, 2.0), -1.0};
    CHECK(std::abs(quad_form(v, eye, v) - cplx(6.0)) < 1e-15);
    const CVector w{cplx(0.0, 2.0), 1.0, 0.0}; // v^H w = 2j - 2j = 0
    CHECK(std::abs(quad_form(v, eye, w)) < 1e-15);

    Gen g(9);
    const CMatrix a = g.pd(3);
    const CVector x = g.vector(3);
    const CVector z = g.vector(3);
    const HermitianFactor f = cholesky(a);
    const cplx oracle = to_eigen(x).dot(to_eigen(a).ldlt().solve(to_eigen(z)));
    CHECK(rel_err(quad_form(x, f, z), oracle) < 1e-12);
}

TEST_CASE("quad_form is conjugate symmetric; logdet and solve scale with gamma^2", "[hermitian][property]")
{
    Gen g(10);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = static_cast<std::size_t>(g.integer(1, 12));
        const CMatrix a = g.pd(n);
        const HermitianFactor f = cholesky(a);
        const CVector x = g.vector(n);
        const CVector z = g.vector(n);
        CHECK(std::abs(quad_form(x, f, z) - std::conj(quad_form(z, f, x))) <= 1e-12 * std::abs(quad_form(x, f, z)));

        const double gamma2 = std::pow(10.0, g.uniform(-6.0, 6.0));
        CMatrix b = a;
        b *= gamma2;
        const HermitianFactor fb = cholesky(b);
        CHECK(std::abs(logdet(fb) - (static_cast<double>(n) * std::log(gamma2) + logdet(f))) < 1e-9);
        const CVector xa = solve(f, z);
        const CVector xb = solve(fb, z);
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(std::abs(xb[i] * gamma2 - xa[i]) <= 1e-11 * std::abs(xa[i]) + 1e-300);
        }
    }
}

TEST_CASE("outer_sum and dot agree with dense products", "[hermitian]")
{
    Gen g(12);
    const CMatrix z = g.matrix(5, 7);
    const Eigen::MatrixXcd oracle = to_eigen(z) * to_eigen(z).adjoint();
    const CMatrix s = outer_sum(z);
    CHECK((to_eigen(s) - oracle).norm() < 1e-12 * oracle.norm());

    const CVector a = g.vector(6);
    const CVector b = g.vector(6);
    CHECK(rel_err(dot(a, b), to_eigen(a).dot(to_eigen(b))) < 1e-14);
    CHECK_THROWS_AS(dot(a, CVector(5)), std::invalid_argument);
}
