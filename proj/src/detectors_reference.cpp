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

#include "risdet/detectors_reference.hpp"

#include <cmath>
#include <limits>

namespace risdet::reference {

namespace {

void check_inputs(const DataSet& data, const SteeringSet& steering) {
    if (data.primary.rows() != steering.dim() || data.secondary.rows() != steering.dim()) {
        throw std::invalid_argument("data dimension does not match the steering vectors");
    }
    if (data.primary_cells() < 3) {
        throw std::invalid_argument("primary window needs at least 3 cells");
    }
    if (data.secondary_cells() < data.dim()) {
        throw NotPositiveDefinite("training set has fewer than N snapshots; S_S is singular");
    }
}

CMatrix pair_scatter(const DataSet& data, int n, int m) {
    CMatrix s = outer_sum(data.secondary);
    for (int k = 2; k <= static_cast<int>(data.primary_cells()); ++k) {
        if (k != n && k != m) {
            add_outer(s, data.primary.col(k - 1));
        }
    }
    return s;
}

double total_logdet(const DataSet& data) {
    CMatrix s = outer_sum(data.secondary);
    s += outer_sum(data.primary);
    return logdet(cholesky(s));
}

struct Echoes {
    std::array<std::span<const cplx>, 3> z;
    std::array<std::span<const cplx>, 3> v;
};

Echoes echoes(const DataSet& data, const SteeringSet& s, int n, int m) {
    return {{data.primary.col(0), data.primary.col(n - 1), data.primary.col(m - 1)}, {s.v_r, s.v_sr, s.v_s}};
}

CVector residual(const Echoes& e, int k, cplx a) {
    CVector r(e.z[k].begin(), e.z[k].end());
    for (std::size_t i = 0; i < r.size(); ++i) {
        r[i] -= a * e.v[k][i];
    }
    return r;
}

// log det(S_{n,m} + Y Y^H) at the given amplitudes
double residual_logdet(const CMatrix& snm, const Echoes& e, const std::array<cplx, 3>& alpha) {
    CMatrix d = snm;
    for (int k = 0; k < 3; ++k) {
        add_outer(d, residual(e, k, alpha[k]));
    }
    return logdet(cholesky(d));
}

std::array<cplx, 3> plug_alpha(const HermitianFactor& f, const Echoes& e) {
    std::array<cplx, 3> a{};
    for (int k = 0; k < 3; ++k) {
        a[k] = alpha_hat(e.v[k], f, e.z[k]);
    }
    return a;
}

CGlrtTrace cyclic(const DataSet& data, const SteeringSet& steering, int n, int m, const CGlrtConfig& cfg,
                  bool stop_early) {
    const CMatrix snm = pair_scatter(data, n, m);
    const Echoes e = echoes(data, steering, n, m);
    const double k_total = static_cast<double>(data.primary_cells() + data.secondary_cells());

    CGlrtTrace trace;
    trace.alpha = plug_alpha(cholesky(snm), e);
    double ld = residual_logdet(snm, e, trace.alpha);
    trace.objective.push_back(ld);
    for (int h = 1; h <= cfg.h_max; ++h) {
        const double ld_start = ld;
        for (int k = 0; k < 3; ++k) {
            CMatrix c = snm;
            for (int o = 0; o < 3; ++o) {
                if (o != k) {
                    add_outer(c, residual(e, o, trace.alpha[o]));
                }
            }
            trace.alpha[k] = alpha_hat(e.v[k], cholesky(c), e.z[k]);
            const double next = residual_logdet(snm, e, trace.alpha);
            if (next > ld + 1e-10 * (1.0 + std::abs(ld))) {
                ++trace.monotonic_violations;
            }
            ld = next;
            trace.objective.push_back(ld);
        }
        const double gain = std::expm1(k_total * (ld_start - ld));
        trace.gains.push_back(gain);
        trace.iterations = h;
        if (stop_early && gain < cfg.epsilon) {
            break;
        }
    }
    trace.log_statistic = total_logdet(data) - ld;
    return trace;
}

template <typename PairStat>
DetectionOutcome maximize(const DataSet& data, PairStat&& stat) {
    DetectionOutcome out;
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& [n, m] : enumerate_pairs(static_cast<int>(data.primary_cells()))) {
        int iterations = 0;
        const double v = stat(n, m, iterations);
        if (v > best) {
            best = v;
            out.n_hat = n;
            out.m_hat = m;
            out.iterations = iterations;
        }
    }
    out.statistic = best;
    return out;
}

} // namespace

DetectionOutcome ep_glrt_km(const DataSet& data, const SteeringSet& steering, int variant) {
    if (variant != 1 && variant != 2) {
        throw std::invalid_argument("ep_glrt_km: variant must be 1 or 2");
    }
    check_inputs(data, steering);
    const HermitianFactor fs = cholesky(outer_sum(data.secondary));
    return maximize(data, [&](int n, int m, int&) {
        const HermitianFactor f = variant == 1 ? fs : cholesky(pair_scatter(data, n, m));
        const Echoes e = echoes(data, steering, n, m);
        double t = 0.0;
        for (int k = 0; k < 3; ++k) {
            t += std::norm(quad_form(e.v[k], f, e.z[k])) / quad_form(e.v[k], f, e.v[k]).real();
        }
        return t;
    });
}

DetectionOutcome ep_glrt_ka(const DataSet& data, const SteeringSet& steering) {
    check_inputs(data, steering);
    const HermitianFactor fs = cholesky(outer_sum(data.secondary));
    const double total = total_logdet(data);
    DetectionOutcome out = maximize(data, [&](int n, int m, int&) {
        const Echoes e = echoes(data, steering, n, m);
        return total - residual_logdet(pair_scatter(data, n, m), e, plug_alpha(fs, e));
    });
    out.statistic = std::exp(out.statistic);
    return out;
}

DetectionOutcome a_glrt(const DataSet& data, const SteeringSet& steering) {
    check_inputs(data, steering);
    const double total = total_logdet(data);
    DetectionOutcome out = maximize(data, [&](int n, int m, int&) {
        const CMatrix snm = pair_scatter(data, n, m);
        const Echoes e = echoes(data, steering, n, m);
        return total - residual_logdet(snm, e, plug_alpha(cholesky(snm), e));
    });
    out.statistic = std::exp(out.statistic);
    return out;
}

DetectionOutcome c_glrt(const DataSet& data, const SteeringSet& steering, const CGlrtConfig& cfg) {
    cfg.validate();
    check_inputs(data, steering);
    DetectionOutcome out = maximize(data, [&](int n, int m, int& iterations) {
        const CGlrtTrace t = cyclic(data, steering, n, m, cfg, true);
        if (t.monotonic_violations > 0) {
            throw NonMonotonic("C-GLRT likelihood decreased");
        }
        iterations = t.iterations;
        return t.log_statistic;
    });
    out.statistic = std::exp(out.statistic);
    return out;
}

CGlrtTrace c_glrt_trace(const DataSet& data, const SteeringSet& steering, int n, int m, const CGlrtConfig& cfg,
                        bool stop_early) {
    cfg.validate();
    check_inputs(data, steering);
    if (!(1 < n && n < m && m <= static_cast<int>(data.primary_cells()))) {
        throw std::invalid_argument("c_glrt_trace: (n, m) must satisfy 1 < n < m <= K_P");
    }
    return cyclic(data, steering, n, m, cfg, stop_early);
}

DetectionOutcome evaluate(const DetectorSpec& spec, const DataSet& data, const SteeringSet& steering,
                          const CGlrtConfig& cfg) {
    switch (spec.kind) {
    case DetectorKind::ep_glrt_km_1:
        return reference::ep_glrt_km(data, steering, 1);
    case DetectorKind::ep_glrt_km_2:
        return reference::ep_glrt_km(data, steering, 2);
    case DetectorKind::ep_glrt_ka:
        return reference::ep_glrt_ka(data, steering);
    case DetectorKind::c_glrt:
        return reference::c_glrt(data, steering, cfg);
    case DetectorKind::a_glrt:
        return reference::a_glrt(data, steering);
    case DetectorKind::kelly:
    case DetectorKind::amf: {
        if (spec.cell < 1 || spec.cell > static_cast<int>(data.primary_cells())) {
            throw std::invalid_argument("baseline cell outside the primary window");
        }
        const std::span<const cplx> v = spec.steering == SteeringChoice::v_r    ? std::span<const cplx>(steering.v_r)
                                        : spec.steering == SteeringChoice::v_sr ? std::span<const cplx>(steering.v_sr)
                                                                                : std::span<const cplx>(steering.v_s);
        const auto z = data.primary.col(spec.cell - 1);
        DetectionOutcome out;
        out.statistic = spec.kind == DetectorKind::kelly ? kelly(z, data.secondary, v) : amf(z, data.secondary, v);
        return out;
    }
    }
    throw std::logic_error("evaluate: unknown detector kind");
}

} // namespace risdet::reference
