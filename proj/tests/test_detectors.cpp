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

#include "risdet/detectors.hpp"
#include "risdet/detectors_reference.hpp"
#include "oracle.hpp"
#include "support.hpp"

#include <cmath>

using namespace risdet;
using risdet::testing::Gen;
using risdet::testing::rel_err;
using risdet::testing::scaled;
using risdet::testing::to_eigen;
namespace oracle = risdet::testing::oracle;

namespace {

DataSet scalar_data(const std::vector<cplx>& z, double s_s) {
    DataSet d{CMatrix(1, z.size()), CMatrix(1, 1)};
    for (std::size_t k = 0; k < z.size(); ++k) {
        d.primary(0, k) = z[k];
    }
    d.secondary(0, 0) = std::sqrt(s_s);
    return d;
}

const DetectorSpec kKm1{.kind = DetectorKind::ep_glrt_km_1};
const DetectorSpec kKm2{.kind = DetectorKind::ep_glrt_km_2};
const DetectorSpec kKa{.kind = DetectorKind::ep_glrt_ka};
const DetectorSpec kC{.kind = DetectorKind::c_glrt};
const DetectorSpec kA{.kind = DetectorKind::a_glrt};

} // namespace

TEST_CASE("alpha_hat: projection, orthogonal and weighted examples", "[detectors]")
{
    const HermitianFactor eye = cholesky(CMatrix::identity(2));
    const CVector v{1.0 / std::sqrt(2.0), cplx(0.0, 1.0 / std::sqrt(2.0))};
    const CVector z{3.0 * v[0], 3.0 * v[1]};
    CHECK(std::abs(alpha_hat(v, eye, z) - cplx(3.0)) < 1e-14);
    const CVector orth{1.0 / std::sqrt(2.0), cplx(0.0, -1.0 / std::sqrt(2.0))};
    CHECK(std::abs(alpha_hat(v, eye, orth)) < 1e-14);

    CMatrix w(2, 2);
    w(0, 0) = 1.0;
    w(1, 1) = 4.0;
    CHECK(std::abs(alpha_hat(CVector{1.0, 1.0}, cholesky(w), CVector{2.0, 4.0}) - cplx(2.4)) < 1e-14);
}

TEST_CASE("N = 1 scalar oracles for every statistic", "[detectors][oracle]")
{
    const SteeringSet s = make_steering_set(CVector{1.0}, CVector{1.0});
    REQUIRE(s.v_sr[0] == cplx(2.0));

    SECTION("KM-1 worked example")
    {
        const DataSet d = scalar_data({1.0, 2.0, 3.0}, 2.0);
        const DetectionOutcome o = ep_glrt_km(d, s, 1);
        CHECK(rel_err(o.statistic, 7.0) < 1e-12);
        CHECK(o.n_hat == 2);
        CHECK(o.m_hat == 3);
        // with K_P = 3, S_{n,m} = S_S, so the two plug choices agree
        CHECK(rel_err(ep_glrt_km(d, s, 2).statistic, 7.0) < 1e-12);
    }

    SECTION("det-ratio detectors collapse to (S_P + S_S) / S_{n,m}")
    {
        const std::vector<cplx> z{cplx(0.3, 1.0), 2.0, cplx(0.0, -0.5), cplx(1.5, 1.5), 0.2, cplx(-0.7, 0.1)};
        const double s_s = 1.7;
        const DataSet d = scalar_data(z, s_s);
        double s_p = 0.0;
        for (const cplx x : z) {
            s_p += std::norm(x);
        }
        // best pair keeps the two largest energies among cells 2..6 out of S_{n,m}
        double best = 0.0;
        int bn = 0;
        int bm = 0;
        for (int n = 2; n <= 6; ++n) {
            for (int m = n + 1; m <= 6; ++m) {
                double snm = s_s;
                for (int k = 2; k <= 6; ++k) {
                    if (k != n && k != m) {
                        snm += std::norm(z[static_cast<std::size_t>(k - 1)]);
                    }
                }
                const double v = (s_p + s_s) / snm;
                if (v > best) {
                    best = v;
                    bn = n;
                    bm = m;
                }
            }
        }
        // energies of cells 2..6 are 4, 0.25, 4.5, 0.04, 0.5
        CHECK(bn == 2);
        CHECK(bm == 4);
        for (const auto& o : {ep_glrt_ka(d, s), a_glrt(d, s), c_glrt(d, s)}) {
            CHECK(rel_err(o.statistic, best) < 1e-10);
            CHECK(o.n_hat == bn);
            CHECK(o.m_hat == bm);
        }
    }

    SECTION("Kelly and AMF")
    {
        const cplx z(1.2, -0.4);
        const double s_s = 2.5;
        CMatrix r(1, 1);
        r(0, 0) = std::sqrt(s_s);
        const CVector zv{z};
        const CVector v{std::polar(1.0, 0.3)};
        CHECK(rel_err(kelly(zv, r, v), std::norm(z) / (s_s + std::norm(z))) < 1e-12);
        CHECK(rel_err(amf(zv, r, v), std::norm(z) / s_s) < 1e-12);
    }
}

TEST_CASE("zero primary data: KM statistics 0, det ratios 1, one C-GLRT iteration", "[detectors]")
{
    Gen g(5);
    const SteeringSet s = g.steering(4);
    DataSet d = g.dataset(4, 6, 8);
    d.primary = CMatrix(4, 6);
    for (int variant : {1, 2}) {
        const DetectionOutcome o = ep_glrt_km(d, s, variant);
        CHECK(o.statistic == 0.0);
        CHECK(o.n_hat == 2); // all pairs tie; the first in lexicographic order wins
        CHECK(o.m_hat == 3);
    }
    CHECK(std::abs(ep_glrt_ka(d, s).statistic - 1.0) < 1e-12);
    CHECK(std::abs(a_glrt(d, s).statistic - 1.0) < 1e-12);
    const DetectionOutcome c = c_glrt(d, s);
    CHECK(std::abs(c.statistic - 1.0) < 1e-12);
    CHECK(c.iterations == 1);
    DetectionWorkspace ws(d, s);
    const CGlrtTrace t = ws.c_glrt_trace(2, 3, {});
    for (const cplx a : t.alpha) {
        CHECK(a == cplx(0.0));
    }
}

TEST_CASE("Kelly and AMF: trivial cases and explicit-inverse oracle", "[detectors][oracle]")
{
    const std::size_t n = 3;
    const CVector v = steering_vector(20.0, n);
    const CMatrix eye = CMatrix::identity(n); // R R^H = I
    CHECK(kelly(CVector(n), eye, v) == 0.0);
    CHECK(amf(CVector(n), eye, v) == 0.0);
    const double vv = static_cast<double>(n);
    CHECK(rel_err(kelly(v, eye, v), vv / (1.0 + vv)) < 1e-14);
    CHECK(rel_err(amf(v, eye, v), vv) < 1e-14);

    Gen g(17);
    for (int trial = 0; trial < 20; ++trial) {
        const CMatrix r = g.matrix(n, 7);
        const CVector z = g.vector(n);
        const CVector w = g.unit_modulus(n);
        CHECK(rel_err(kelly(z, r, w), oracle::kelly(to_eigen(z), to_eigen(r), to_eigen(w))) < 1e-10);
        CHECK(rel_err(amf(z, r, w), oracle::amf(to_eigen(z), to_eigen(r), to_eigen(w))) < 1e-10);
    }
    CHECK_THROWS_AS(kelly(CVector(n), g.matrix(n, 2), v), NotPositiveDefinite);
}

TEST_CASE("every statistic matches the dense oracle on random data", "[detectors][oracle]")
{
    Gen g(99);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = static_cast<std::size_t>(g.integer(1, 8));
        const std::size_t kp = static_cast<std::size_t>(g.integer(3, 7));
        const std::size_t ks = n + static_cast<std::size_t>(g.integer(0, 8));
        const SteeringSet s = g.steering(n);
        DataSet d = g.dataset(n, kp, ks);
        // plant echoes so the maximizing pair is not arbitrary
        const int tn = g.integer(2, static_cast<int>(kp) - 1);
        const int tm = g.integer(tn + 1, static_cast<int>(kp));
        const cplx amp = 3.0 * g.cnormal();
        for (std::size_t i = 0; i < n; ++i) {
            d.primary(i, 0) += amp * s.v_r[i];
            d.primary(i, static_cast<std::size_t>(tn - 1)) += 3.0 * amp * s.v_sr[i];
            d.primary(i, static_cast<std::size_t>(tm - 1)) += 3.0 * amp * s.v_s[i];
        }
        const oracle::Problem p(d, s);

        const std::pair<DetectorSpec, oracle::Result> cases[] = {
            {kKm1, oracle::km(p, 1)}, {kKm2, oracle::km(p, 2)}, {kKa, oracle::ka(p)},
            {kA, oracle::a(p)},       {kC, oracle::c(p)},
        };
        for (const auto& [spec, want] : cases) {
            INFO(spec.name() << " trial " << trial << " N=" << n << " K_P=" << kp);
            const DetectionOutcome got = evaluate(spec, d, s);
            CHECK(rel_err(got.statistic, want.statistic) < 1e-9);
            CHECK(got.n_hat == want.n);
            CHECK(got.m_hat == want.m);
            if (spec.kind == DetectorKind::c_glrt) {
                CHECK(got.iterations == want.iterations);
            }
        }
    }
}

TEST_CASE("Gram-space kernels agree with the full-matrix reference", "[detectors][reference]")
{
    Gen g(4242);
    std::vector<DetectorSpec> all = proposed_detectors();
    for (const char* name : {"KELLY", "AMF", "KELLY@3/SR", "AMF@6/S"}) {
        all.push_back(parse_detector(name));
    }
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = static_cast<std::size_t>(g.integer(2, 16));
        const SteeringSet s = spatial_steering(g.uniform(-10, 10), g.uniform(-10, 10), n);
        const CMatrix m = build_covariance(CovarianceModel::from_cnr(g.uniform(-15, 30), g.uniform(0, 0.95), n));
        const TargetParams tp{alpha_from_sinr(g.uniform(-20, 10), m, s.v_r), {3, 6, 6}};
        const DataSet d = synthesize(trial % 2 ? Hypothesis::h1 : Hypothesis::h0, tp, m, s, 6,
                                     static_cast<int>(n) + g.integer(0, 16), static_cast<std::uint64_t>(trial));
        DetectionWorkspace ws(d, s);
        for (const auto& spec : all) {
            INFO(spec.name() << " trial " << trial);
            const DetectionOutcome fast = ws.evaluate(spec);
            const DetectionOutcome ref = reference::evaluate(spec, d, s);
            CHECK(rel_err(fast.statistic, ref.statistic) < 1e-9);
            CHECK(fast.n_hat == ref.n_hat);
            CHECK(fast.m_hat == ref.m_hat);
            CHECK(fast.iterations == ref.iterations);
        }
        const CGlrtTrace tf = ws.c_glrt_trace(3, 6, {}, false);
        const CGlrtTrace tr = reference::c_glrt_trace(d, s, 3, 6, {}, false);
        REQUIRE(tf.objective.size() == tr.objective.size());
        for (std::size_t k = 0; k < tf.objective.size(); ++k) {
            CHECK(std::abs(tf.objective[k] - tr.objective[k]) < 1e-9 * (1.0 + std::abs(tr.objective[k])));
        }
    }
}

TEST_CASE("C-GLRT single iteration against a scripted N = 2, K_P = 3 run", "[detectors][oracle]")
{
    // fixed numbers, no generator: every quantity below is transcribed by hand
    DataSet d{CMatrix(2, 3), CMatrix(2, 3)};
    d.primary(0, 0) = cplx(1.0, 0.5);
    d.primary(1, 0) = cplx(0.8, -0.2);
    d.primary(0, 1) = cplx(-0.4, 2.0);
    d.primary(1, 1) = cplx(1.1, 0.7);
    d.primary(0, 2) = cplx(0.3, -1.2);
    d.primary(1, 2) = cplx(-0.9, 0.4);
    d.secondary(0, 0) = 1.0;
    d.secondary(1, 0) = cplx(0.2, 0.1);
    d.secondary(0, 1) = cplx(0.0, -0.3);
    d.secondary(1, 1) = 0.9;
    d.secondary(0, 2) = cplx(0.5, 0.5);
    d.secondary(1, 2) = cplx(-0.4, 0.2);
    const SteeringSet s = make_steering_set(CVector{1.0, cplx(0.0, 1.0)}, CVector{1.0, -1.0});

    using MX = Eigen::Matrix2cd;
    using VX = Eigen::Vector2cd;
    const Eigen::MatrixXcd r = to_eigen(d.secondary);
    const MX snm = r * r.adjoint(); // K_P = 3: no off-pair cells
    const VX z1 = to_eigen(d.primary.col(0));
    const VX zn = to_eigen(d.primary.col(1));
    const VX zm = to_eigen(d.primary.col(2));
    const VX vr = to_eigen(s.v_r);
    const VX vsr = to_eigen(s.v_sr);
    const VX vs = to_eigen(s.v_s);
    auto est = [](const VX& v, const MX& c, const VX& z) {
        const MX ci = c.inverse();
        return v.dot(ci * z) / v.dot(ci * v);
    };
    // initialization from S_{n,m}
    const cplx a1_0 = est(vr, snm, z1);
    const cplx an_0 = est(vsr, snm, zn);
    const cplx am_0 = est(vs, snm, zm);
    auto outer = [](const VX& x) { return MX(x * x.adjoint()); };
    auto objective = [&](cplx a1, cplx an, cplx am) {
        return std::log(std::abs((snm + outer(z1 - a1 * vr) + outer(zn - an * vsr) + outer(zm - am * vs)).determinant()));
    };
    // step 1: C_{n,m}
    const cplx a1 = est(vr, snm + outer(zn - an_0 * vsr) + outer(zm - am_0 * vs), z1);
    // step 2: C_{1,m}
    const cplx an = est(vsr, snm + outer(z1 - a1 * vr) + outer(zm - am_0 * vs), zn);
    // step 3: C_{1,n}, applied to z_m
    const cplx am = est(vs, snm + outer(z1 - a1 * vr) + outer(zn - an * vsr), zm);
    const MX sum = snm + to_eigen(d.primary) * to_eigen(d.primary).adjoint();
    const double want = std::exp(std::log(std::abs(sum.determinant())) - objective(a1, an, am));
    const double gain = std::expm1(6.0 * (objective(a1_0, an_0, am_0) - objective(a1, an, am)));

    const CGlrtConfig one{.epsilon = 1e-5, .h_max = 1};
    const DetectionOutcome got = c_glrt(d, s, one);
    CHECK(rel_err(got.statistic, want) < 1e-10);
    CHECK(got.iterations == 1);
    DetectionWorkspace ws(d, s);
    const CGlrtTrace t = ws.c_glrt_trace(2, 3, one);
    CHECK(rel_err(t.alpha[0], a1) < 1e-10);
    CHECK(rel_err(t.alpha[1], an) < 1e-10);
    CHECK(rel_err(t.alpha[2], am) < 1e-10);
    REQUIRE(t.gains.size() == 1);
    CHECK(std::abs(t.gains[0] - gain) < 1e-10 * (1.0 + std::abs(gain)));
    CHECK(rel_err(reference::c_glrt(d, s, one).statistic, want) < 1e-10);
}

TEST_CASE("pair grid is complete and lexicographic", "[detectors][property]")
{
    for (int kp = 3; kp <= 20; ++kp) {
        const auto pairs = enumerate_pairs(kp);
        CHECK(pairs.size() == static_cast<std::size_t>((kp - 1) * (kp - 2) / 2));
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            CHECK(1 < pairs[i].first);
            CHECK(pairs[i].first < pairs[i].second);
            CHECK(pairs[i].second <= kp);
            if (i > 0) {
                CHECK(pairs[i - 1] < pairs[i]);
            }
        }
    }
}

TEST_CASE("statistics are invariant to per-column phase rotations", "[detectors][property]")
{
    Gen g(606);
    std::vector<DetectorSpec> all = proposed_detectors();
    all.push_back(parse_detector("KELLY@2"));
    all.push_back(parse_detector("AMF@4/S"));
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t n = static_cast<std::size_t>(g.integer(1, 10));
        const SteeringSet s = g.steering(n);
        const DataSet d = g.dataset(n, 6, n + 4);
        DataSet rot = d;
        for (std::size_t k = 0; k < 6; ++k) {
            const cplx ph = g.phase();
            for (std::size_t i = 0; i < n; ++i) {
                rot.primary(i, k) *= ph;
            }
        }
        DetectionWorkspace a(d, s);
        DetectionWorkspace b(rot, s);
        for (const auto& spec : all) {
            INFO(spec.name());
            const DetectionOutcome x = a.evaluate(spec);
            const DetectionOutcome y = b.evaluate(spec);
            CHECK(rel_err(y.statistic, x.statistic) < 1e-9);
            CHECK(x.n_hat == y.n_hat);
            CHECK(x.m_hat == y.m_hat);
        }
    }
}

TEST_CASE("scale invariance and bounded CFAR on small random draws", "[detectors][property]")
{
    Gen g(707);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = static_cast<std::size_t>(g.integer(1, 8));
        const SteeringSet s = g.steering(n);
        const DataSet d = g.dataset(n, static_cast<std::size_t>(g.integer(3, 7)), 2 * n);
        DetectionWorkspace base(d, s);
        for (const double gamma : {1e-3, 10.0, 1e3}) {
            const DataSet sd = scaled(d, gamma);
            DetectionWorkspace ws(sd, s);
            for (const auto& spec : proposed_detectors()) {
                INFO(spec.name() << " gamma " << gamma);
                const DetectionOutcome x = base.evaluate(spec);
                const DetectionOutcome y = ws.evaluate(spec);
                // the plugged matrix scales like gamma^2 too, so the KM forms are invariant as well
                CHECK(rel_err(y.statistic, x.statistic) < 1e-9);
                CHECK(x.n_hat == y.n_hat);
                CHECK(x.m_hat == y.m_hat);
            }
        }
        const double bound = base.det_ratio_bound();
        for (const auto& spec : {kKa, kA, kC}) {
            CHECK(base.evaluate(spec).statistic <= bound * (1.0 + 1e-12));
        }
        CHECK(base.evaluate(kKm1).statistic <= base.km1_bound() * (1.0 + 1e-12));
    }
}

TEST_CASE("C-GLRT: likelihood never decreases and dominates A-GLRT pairwise", "[detectors][property]")
{
    Gen g(808);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = static_cast<std::size_t>(g.integer(2, 12));
        const SteeringSet s = spatial_steering(0.5, -0.4, n);
        const CMatrix m = build_covariance(CovarianceModel::from_cnr(25.0, 0.9, n));
        const TargetParams tp{alpha_from_sinr(g.uniform(-15, 15), m, s.v_r), {3, 6, 6}};
        const DataSet d = synthesize(Hypothesis::h1, tp, m, s, 6, static_cast<int>(2 * n),
                                     static_cast<std::uint64_t>(1000 + trial));
        DetectionWorkspace ws(d, s);
        for (const auto& [pn, pm] : enumerate_pairs(6)) {
            const CGlrtTrace t = ws.c_glrt_trace(pn, pm, {}, false);
            CHECK(t.monotonic_violations == 0);
            CHECK(t.gains.size() == 20);
            for (std::size_t k = 1; k < t.objective.size(); ++k) {
                CHECK(t.objective[k] <= t.objective[k - 1] + 1e-10 * (1.0 + std::abs(t.objective[k - 1])));
            }
        }
        CHECK(ws.evaluate(kC).statistic >= ws.evaluate(kA).statistic * (1.0 - 1e-12));
    }
}

TEST_CASE("preconditions and configuration errors", "[detectors]")
{
    Gen g(909);
    const SteeringSet s = g.steering(4);
    CHECK_THROWS_AS(ep_glrt_km(g.dataset(4, 6, 3), s, 1), NotPositiveDefinite);
    CHECK_THROWS_AS(a_glrt(g.dataset(4, 2, 8), s), std::invalid_argument);
    CHECK_THROWS_AS(ep_glrt_km(g.dataset(4, 6, 8), s, 3), std::invalid_argument);
    CHECK_THROWS_AS(a_glrt(g.dataset(3, 6, 8), s), std::invalid_argument);
    CHECK_THROWS_AS(c_glrt(g.dataset(4, 6, 8), s, {.epsilon = 0.0, .h_max = 20}), std::invalid_argument);
    CHECK_THROWS_AS(c_glrt(g.dataset(4, 6, 8), s, {.epsilon = 1e-5, .h_max = 0}), std::invalid_argument);
    const DataSet d = g.dataset(4, 6, 8);
    DetectionWorkspace ws(d, s);
    CHECK_THROWS_AS(ws.evaluate(parse_detector("KELLY@7")), std::invalid_argument);
    CHECK_THROWS_AS(ws.c_glrt_trace(3, 3, {}), std::invalid_argument);
}

TEST_CASE("detector names parse and print", "[detectors]")
{
    for (const char* name : {"EP-GLRT-KM-1", "EP-GLRT-KM-2", "EP-GLRT-KA", "C-GLRT", "A-GLRT", "KELLY", "AMF",
                             "KELLY@3", "AMF@6/S", "KELLY@3/SR"}) {
        CHECK(parse_detector(name).name() == name);
    }
    CHECK(parse_detector("ep_glrt_km_1").kind == DetectorKind::ep_glrt_km_1);
    CHECK(parse_detector("c-glrt").kind == DetectorKind::c_glrt);
    const DetectorSpec k = parse_detector("KELLY@6/S");
    CHECK(k.cell == 6);
    CHECK(k.steering == SteeringChoice::v_s);
    CHECK(k.threshold_key() == parse_detector("KELLY").threshold_key());
    CHECK(k.threshold_key() != parse_detector("AMF").threshold_key());
    CHECK_THROWS_AS(parse_detector("GLRT"), std::invalid_argument);
    CHECK_THROWS_AS(parse_detector("A-GLRT@3"), std::invalid_argument);
    CHECK_THROWS_AS(parse_detector("KELLY@x"), std::invalid_argument);
    CHECK_THROWS_AS(parse_detector("KELLY@0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_detector("AMF/T"), std::invalid_argument);
    CHECK(proposed_detectors().size() == 5);
}
