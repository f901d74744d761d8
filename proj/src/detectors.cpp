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

#include "risdet/detectors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

namespace risdet {

namespace {

// Columns of the per-pair basis [z_1, z_n, z_m, v_r, v_sr, v_s].
constexpr int kSteerOffset = 3;

// Relative slack allowed before a likelihood decrease counts as a violation.
constexpr double kMonotoneTolerance = 1e-10;
// Residual Gram entries are differences of terms as large as z^H S^{-1} z + |a|^2 v^H S^{-1} v;
// at high SINR their rounding error, not the update, sets the noise floor of the objective.
constexpr double kGramRoundoff = 64.0 * std::numeric_limits<double>::epsilon();

// Linear combination c_i e_i + c_j e_j of two basis columns.
struct Coef2 {
    int i = 0;
    int j = 0;
    cplx ci{1.0, 0.0};
    cplx cj{0.0, 0.0};
};

Coef2 unit(int i) { return {i, i, 1.0, 0.0}; }

// Residual z_k - a v_k of echo k (0: bin 1, 1: bin n, 2: bin m).
Coef2 residual(int k, cplx a) { return {k, k + kSteerOffset, 1.0, -a}; }

// a^H G b for combinations of basis columns
cplx form(const CMatrix& g, const Coef2& a, const Coef2& b) {
    const cplx gi = g(a.i, b.i) * b.ci + g(a.i, b.j) * b.cj;
    const cplx gj = g(a.j, b.i) * b.ci + g(a.j, b.j) * b.cj;
    return std::conj(a.ci) * gi + std::conj(a.cj) * gj;
}

CMatrix gram(const CMatrix& w) {
    const std::size_t k = w.cols();
    CMatrix g(k, k);
    for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t i = 0; i <= j; ++i) {
            const cplx v = dot(w.col(i), w.col(j));
            g(i, j) = v;
            g(j, i) = std::conj(v);
        }
        g(j, j) = g(j, j).real();
    }
    return g;
}

// log det(I + H) for the 3 x 3 residual Gram matrix H.
double logdet_eye_plus(const std::array<std::array<cplx, 3>, 3>& h) {
    std::array<std::array<cplx, 3>, 3> l{};
    double ld = 0.0;
    for (int j = 0; j < 3; ++j) {
        double d = 1.0 + h[j][j].real();
        for (int k = 0; k < j; ++k) {
            d -= std::norm(l[j][k]);
        }
        if (!(d > 0.0) || !std::isfinite(d)) {
            throw NotPositiveDefinite("residual Gram update is not positive definite");
        }
        const double ljj = std::sqrt(d);
        l[j][j] = ljj;
        ld += std::log(ljj);
        for (int i = j + 1; i < 3; ++i) {
            cplx s = h[i][j];
            for (int k = 0; k < j; ++k) {
                s -= l[i][k] * std::conj(l[j][k]);
            }
            l[i][j] = s / ljj;
        }
    }
    return 2.0 * ld;
}

// log det(I + Y^H S^{-1} Y) for Y = [z_1 - a_1 v_r, z_n - a_n v_sr, z_m - a_m v_s].
double residual_logdet(const CMatrix& g, const std::array<cplx, 3>& alpha) {
    std::array<Coef2, 3> c;
    for (int k = 0; k < 3; ++k) {
        c[k] = residual(k, alpha[k]);
    }
    std::array<std::array<cplx, 3>, 3> h{};
    for (int j = 0; j < 3; ++j) {
        for (int i = 0; i <= j; ++i) {
            h[i][j] = form(g, c[i], c[j]);
            h[j][i] = std::conj(h[i][j]);
        }
    }
    return logdet_eye_plus(h);
}

std::string normalize_name(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char ch : s) {
        if (std::isspace(static_cast<unsigned char>(ch))) {
            continue;
        }
        out.push_back(ch == '_' ? '-' : static_cast<char>(std::toupper(static_cast<unsigned char>(ch))));
    }
    return out;
}

struct NamedKind {
    std::string_view name;
    DetectorKind kind;
};

constexpr std::array<NamedKind, 7> kKindNames{{
    {"EP-GLRT-KM-1", DetectorKind::ep_glrt_km_1},
    {"EP-GLRT-KM-2", DetectorKind::ep_glrt_km_2},
    {"EP-GLRT-KA", DetectorKind::ep_glrt_ka},
    {"C-GLRT", DetectorKind::c_glrt},
    {"A-GLRT", DetectorKind::a_glrt},
    {"KELLY", DetectorKind::kelly},
    {"AMF", DetectorKind::amf},
}};

std::string_view steering_suffix(SteeringChoice s) {
    switch (s) {
    case SteeringChoice::v_r:
        return "R";
    case SteeringChoice::v_sr:
        return "SR";
    case SteeringChoice::v_s:
        return "S";
    }
    return "R";
}

HermitianFactor training_factor(const CMatrix& secondary, std::size_t dim) {
    if (secondary.rows() != dim) {
        throw std::invalid_argument("secondary data dimension does not match the steering vector");
    }
    if (secondary.cols() < dim) {
        throw NotPositiveDefinite("training set has fewer than N snapshots; S_S is singular");
    }
    return cholesky(outer_sum(secondary));
}

} // namespace

std::string_view kind_name(DetectorKind kind) {
    for (const auto& nk : kKindNames) {
        if (nk.kind == kind) {
            return nk.name;
        }
    }
    return "?";
}

std::string DetectorSpec::name() const {
    std::string out(kind_name(kind));
    if (!is_baseline()) {
        return out;
    }
    if (cell != 1) {
        out += "@" + std::to_string(cell);
    }
    if (steering != SteeringChoice::v_r) {
        out += "/";
        out += steering_suffix(steering);
    }
    return out;
}

std::string DetectorSpec::threshold_key() const {
    // Kelly and AMF are CFAR with an H0 law that depends on neither the cell nor v.
    return std::string(kind_name(kind));
}

DetectorSpec parse_detector(std::string_view name) {
    const std::string s = normalize_name(name);
    std::string base = s;
    std::string cell_part;
    std::string steer_part;
    if (const auto slash = base.find('/'); slash != std::string::npos) {
        steer_part = base.substr(slash + 1);
        base.resize(slash);
    }
    if (const auto at = base.find('@'); at != std::string::npos) {
        cell_part = base.substr(at + 1);
        base.resize(at);
    }
    const auto it = std::find_if(kKindNames.begin(), kKindNames.end(),
                                 [&](const NamedKind& nk) { return nk.name == base; });
    if (it == kKindNames.end()) {
        throw std::invalid_argument("unknown detector '" + std::string(name) + "'");
    }
    DetectorSpec spec{.kind = it->kind};
    if (!spec.is_baseline()) {
        if (!cell_part.empty() || !steer_part.empty()) {
            throw std::invalid_argument("detector '" + std::string(name) + "' takes no cell or steering suffix");
        }
        return spec;
    }
    if (!cell_part.empty()) {
        std::size_t used = 0;
        int cell = 0;
        try {
            cell = std::stoi(cell_part, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != cell_part.size() || cell < 1) {
            throw std::invalid_argument("bad cell index in detector '" + std::string(name) + "'");
        }
        spec.cell = cell;
    }
    if (!steer_part.empty()) {
        if (steer_part == "R") {
            spec.steering = SteeringChoice::v_r;
        } else if (steer_part == "SR") {
            spec.steering = SteeringChoice::v_sr;
        } else if (steer_part == "S") {
            spec.steering = SteeringChoice::v_s;
        } else {
            throw std::invalid_argument("bad steering choice in detector '" + std::string(name) + "'");
        }
    }
    return spec;
}

std::vector<DetectorSpec> proposed_detectors() {
    return {
        {.kind = DetectorKind::ep_glrt_km_1}, {.kind = DetectorKind::ep_glrt_km_2},
        {.kind = DetectorKind::ep_glrt_ka},   {.kind = DetectorKind::c_glrt},
        {.kind = DetectorKind::a_glrt},
    };
}

void CGlrtConfig::validate() const {
    if (!(epsilon > 0.0)) {
        throw std::invalid_argument("C-GLRT epsilon must be positive");
    }
    if (h_max < 1) {
        throw std::invalid_argument("C-GLRT h_max must be at least 1");
    }
}

std::vector<std::pair<int, int>> enumerate_pairs(int primary_cells) {
    std::vector<std::pair<int, int>> pairs;
    for (int n = 2; n <= primary_cells; ++n) {
        for (int m = n + 1; m <= primary_cells; ++m) {
            pairs.emplace_back(n, m);
        }
    }
    return pairs;
}

cplx alpha_hat(std::span<const cplx> v, const HermitianFactor& w, std::span<const cplx> z) {
    const CVector wv = whiten(w, v);
    const CVector wz = whiten(w, z);
    const double vv = dot(wv, wv).real();
    if (!(vv > 0.0)) {
        throw std::invalid_argument("alpha_hat: zero steering vector");
    }
    return dot(wv, wz) / vv;
}

DetectionWorkspace::DetectionWorkspace(const DataSet& data, const SteeringSet& steering)
    : data_(data), steering_(steering) {
    const std::size_t dim = steering.dim();
    if (dim == 0 || steering.v_s.size() != dim || steering.v_sr.size() != dim) {
        throw std::invalid_argument("steering vectors must be non-empty and of equal length");
    }
    if (data.primary.rows() != dim || data.secondary.rows() != dim) {
        throw std::invalid_argument("data dimension does not match the steering vectors");
    }
    if (data.primary_cells() < 3) {
        throw std::invalid_argument("primary window needs at least 3 cells");
    }
    if (data.secondary_cells() < dim) {
        throw NotPositiveDefinite("training set has fewer than N snapshots; S_S is singular");
    }
    kp_ = static_cast<int>(data.primary_cells());
    n_total_ = kp_ + static_cast<int>(data.secondary_cells());
}

void DetectionWorkspace::ensure_secondary() {
    if (secondary_gram_) {
        return;
    }
    const std::size_t dim = steering_.dim();
    training_scatter_ = outer_sum(data_.secondary);
    const HermitianFactor f = cholesky(*training_scatter_);
    CMatrix basis(dim, static_cast<std::size_t>(kp_) + 3);
    for (int k = 0; k < kp_; ++k) {
        std::copy_n(data_.primary.col(k).begin(), dim, basis.col(k).begin());
    }
    std::copy_n(steering_.v_r.begin(), dim, basis.col(kp_).begin());
    std::copy_n(steering_.v_sr.begin(), dim, basis.col(kp_ + 1).begin());
    std::copy_n(steering_.v_s.begin(), dim, basis.col(kp_ + 2).begin());
    secondary_gram_ = gram(whiten(f, basis));
}

double DetectionWorkspace::logdet_total() {
    if (!logdet_total_) {
        ensure_secondary();
        CMatrix s = *training_scatter_;
        for (int k = 0; k < kp_; ++k) {
            add_outer(s, data_.primary.col(k));
        }
        logdet_total_ = logdet(cholesky(s));
    }
    return *logdet_total_;
}

void DetectionWorkspace::ensure_pairs() {
    if (!pairs_.empty()) {
        return;
    }
    ensure_secondary();
    const std::size_t dim = steering_.dim();
    CMatrix basis(dim, 6);
    std::copy_n(data_.primary.col(0).begin(), dim, basis.col(0).begin());
    std::copy_n(steering_.v_r.begin(), dim, basis.col(3).begin());
    std::copy_n(steering_.v_sr.begin(), dim, basis.col(4).begin());
    std::copy_n(steering_.v_s.begin(), dim, basis.col(5).begin());

    const auto pairs = enumerate_pairs(kp_);
    pairs_.reserve(pairs.size());
    for (const auto& [n, m] : pairs) {
        // S_{n,m} = S_S + sum of z_k z_k^H over the cells not hypothesized to hold echoes
        CMatrix s = *training_scatter_;
        for (int k = 2; k <= kp_; ++k) {
            if (k != n && k != m) {
                add_outer(s, data_.primary.col(k - 1));
            }
        }
        const HermitianFactor f = cholesky(s);
        std::copy_n(data_.primary.col(n - 1).begin(), dim, basis.col(1).begin());
        std::copy_n(data_.primary.col(m - 1).begin(), dim, basis.col(2).begin());
        pairs_.push_back(PairStats{.n = n, .m = m, .logdet = logdet(f), .gram = gram(whiten(f, basis))});
    }
}

DetectionOutcome DetectionWorkspace::km(bool pair_plug) {
    DetectionOutcome out;
    double best = -std::numeric_limits<double>::infinity();
    auto consider = [&](double value, int n, int m) {
        if (value > best) {
            best = value;
            out.n_hat = n;
            out.m_hat = m;
        }
    };
    if (pair_plug) {
        ensure_pairs();
        for (const auto& p : pairs_) {
            const CMatrix& g = p.gram;
            double t = 0.0;
            for (int k = 0; k < 3; ++k) {
                t += std::norm(g(k + kSteerOffset, k)) / g(k + kSteerOffset, k + kSteerOffset).real();
            }
            consider(t, p.n, p.m);
        }
    } else {
        ensure_secondary();
        const CMatrix& g = *secondary_gram_;
        auto energy = [&](int steer, int cell) {
            const int v = kp_ + steer;
            return std::norm(g(v, cell - 1)) / g(v, v).real();
        };
        const double first = energy(0, 1);
        for (const auto& [n, m] : enumerate_pairs(kp_)) {
            consider(first + energy(1, n) + energy(2, m), n, m);
        }
    }
    out.statistic = best;
    return out;
}

CGlrtTrace DetectionWorkspace::cyclic(const PairStats& p, const CGlrtConfig& cfg, bool stop_early) const {
    const CMatrix& g = p.gram;
    CGlrtTrace trace;
    // A-GLRT estimates as the starting point; degree-1 homogeneous in the data
    for (int k = 0; k < 3; ++k) {
        const int v = k + kSteerOffset;
        trace.alpha[k] = g(v, k) / g(v, v).real();
    }
    double obj = residual_logdet(g, trace.alpha);
    trace.objective.push_back(p.logdet + obj);

    for (int h = 1; h <= cfg.h_max; ++h) {
        const double obj_start = obj;
        for (int k = 0; k < 3; ++k) {
            // C = S_{n,m} + U U^H with U the residuals of the two other echoes; the
            // update minimizes (z_k - a v_k)^H C^{-1} (z_k - a v_k) over a.
            const Coef2 u1 = residual((k + 1) % 3, trace.alpha[(k + 1) % 3]);
            const Coef2 u2 = residual((k + 2) % 3, trace.alpha[(k + 2) % 3]);
            const Coef2 x = unit(k + kSteerOffset);
            const Coef2 y = unit(k);

            const double p11 = 1.0 + form(g, u1, u1).real();
            const double p22 = 1.0 + form(g, u2, u2).real();
            const cplx p12 = form(g, u1, u2);
            const double det = p11 * p22 - std::norm(p12);
            const cplx ax1 = form(g, u1, x);
            const cplx ax2 = form(g, u2, x);
            const cplx ay1 = form(g, u1, y);
            const cplx ay2 = form(g, u2, y);
            // a^H (I + Q)^{-1} b with the 2 x 2 inverse written out
            auto correction = [&](cplx a1, cplx a2, cplx b1, cplx b2) {
                const cplx t1 = p22 * b1 - p12 * b2;
                const cplx t2 = -std::conj(p12) * b1 + p11 * b2;
                return (std::conj(a1) * t1 + std::conj(a2) * t2) / det;
            };
            const cplx xy = form(g, x, y) - correction(ax1, ax2, ay1, ay2);
            const double xx = form(g, x, x).real() - correction(ax1, ax2, ax1, ax2).real();
            trace.alpha[k] = xy / xx;

            const double next = residual_logdet(g, trace.alpha);
            double scale = 0.0;
            for (int e = 0; e < 3; ++e) {
                scale = std::max(scale, g(e, e).real() + std::norm(trace.alpha[e]) *
                                                             g(e + kSteerOffset, e + kSteerOffset).real());
            }
            if (next > obj + kMonotoneTolerance * (1.0 + std::abs(obj)) + kGramRoundoff * scale) {
                ++trace.monotonic_violations;
            }
            obj = next;
            trace.objective.push_back(p.logdet + obj);
        }
        const double gain = std::expm1(static_cast<double>(n_total_) * (obj_start - obj));
        trace.gains.push_back(gain);
        trace.iterations = h;
        if (stop_early && gain < cfg.epsilon) {
            break;
        }
    }
    return trace;
}

DetectionOutcome DetectionWorkspace::det_ratio(DetectorKind kind, const CGlrtConfig& cfg) {
    ensure_pairs();
    const double total = logdet_total();
    std::array<cplx, 3> plug{};
    if (kind == DetectorKind::ep_glrt_ka) {
        const CMatrix& gs = *secondary_gram_;
        plug[0] = gs(kp_, 0) / gs(kp_, kp_).real();
    }

    DetectionOutcome out;
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& p : pairs_) {
        const CMatrix& g = p.gram;
        double log_stat = 0.0;
        int iterations = 0;
        switch (kind) {
        case DetectorKind::ep_glrt_ka: {
            const CMatrix& gs = *secondary_gram_;
            plug[1] = gs(kp_ + 1, p.n - 1) / gs(kp_ + 1, kp_ + 1).real();
            plug[2] = gs(kp_ + 2, p.m - 1) / gs(kp_ + 2, kp_ + 2).real();
            log_stat = total - p.logdet - residual_logdet(g, plug);
            break;
        }
        case DetectorKind::a_glrt: {
            std::array<cplx, 3> a{};
            for (int k = 0; k < 3; ++k) {
                a[k] = g(k + kSteerOffset, k) / g(k + kSteerOffset, k + kSteerOffset).real();
            }
            log_stat = total - p.logdet - residual_logdet(g, a);
            break;
        }
        case DetectorKind::c_glrt: {
            const CGlrtTrace t = cyclic(p, cfg, true);
            if (t.monotonic_violations > 0) {
                throw NonMonotonic("C-GLRT likelihood decreased at pair (" + std::to_string(p.n) + ", " +
                                   std::to_string(p.m) + ")");
            }
            log_stat = total - t.objective.back();
            iterations = t.iterations;
            break;
        }
        default:
            throw std::logic_error("det_ratio: not a determinant-ratio detector");
        }
        if (log_stat > best) {
            best = log_stat;
            out.n_hat = p.n;
            out.m_hat = p.m;
            out.iterations = iterations;
        }
    }
    out.statistic = std::exp(best);
    return out;
}

double DetectionWorkspace::baseline(const DetectorSpec& spec) {
    if (spec.cell < 1 || spec.cell > kp_) {
        throw std::invalid_argument("baseline cell " + std::to_string(spec.cell) + " outside the primary window");
    }
    ensure_secondary();
    const CMatrix& g = *secondary_gram_;
    const int v = kp_ + static_cast<int>(spec.steering);
    const int z = spec.cell - 1;
    const double amf_value = std::norm(g(v, z)) / g(v, v).real();
    if (spec.kind == DetectorKind::amf) {
        return amf_value;
    }
    return amf_value / (1.0 + g(z, z).real());
}

DetectionOutcome DetectionWorkspace::evaluate(const DetectorSpec& spec, const CGlrtConfig& cfg) {
    switch (spec.kind) {
    case DetectorKind::ep_glrt_km_1:
        return km(false);
    case DetectorKind::ep_glrt_km_2:
        return km(true);
    case DetectorKind::ep_glrt_ka:
    case DetectorKind::a_glrt:
        return det_ratio(spec.kind, cfg);
    case DetectorKind::c_glrt:
        cfg.validate();
        return det_ratio(spec.kind, cfg);
    case DetectorKind::kelly:
    case DetectorKind::amf: {
        DetectionOutcome out;
        out.statistic = baseline(spec);
        return out;
    }
    }
    throw std::logic_error("evaluate: unknown detector kind");
}

CGlrtTrace DetectionWorkspace::c_glrt_trace(int n, int m, const CGlrtConfig& cfg, bool stop_early) {
    cfg.validate();
    ensure_pairs();
    for (const auto& p : pairs_) {
        if (p.n == n && p.m == m) {
            CGlrtTrace t = cyclic(p, cfg, stop_early);
            t.log_statistic = logdet_total() - t.objective.back();
            return t;
        }
    }
    throw std::invalid_argument("c_glrt_trace: (n, m) must satisfy 1 < n < m <= K_P");
}

double DetectionWorkspace::det_ratio_bound() {
    ensure_pairs();
    const double total = logdet_total();
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& p : pairs_) {
        best = std::max(best, total - p.logdet);
    }
    return std::exp(best);
}

double DetectionWorkspace::km1_bound() {
    ensure_secondary();
    const CMatrix& g = *secondary_gram_;
    double best = 0.0;
    for (const auto& [n, m] : enumerate_pairs(kp_)) {
        best = std::max(best, g(n - 1, n - 1).real() + g(m - 1, m - 1).real());
    }
    return g(0, 0).real() + best;
}

DetectionOutcome evaluate(const DetectorSpec& spec, const DataSet& data, const SteeringSet& steering,
                          const CGlrtConfig& cfg) {
    DetectionWorkspace ws(data, steering);
    return ws.evaluate(spec, cfg);
}

DetectionOutcome ep_glrt_km(const DataSet& data, const SteeringSet& steering, int variant) {
    if (variant != 1 && variant != 2) {
        throw std::invalid_argument("ep_glrt_km: variant must be 1 or 2");
    }
    return evaluate({.kind = variant == 1 ? DetectorKind::ep_glrt_km_1 : DetectorKind::ep_glrt_km_2}, data,
                    steering);
}

DetectionOutcome ep_glrt_ka(const DataSet& data, const SteeringSet& steering) {
    return evaluate({.kind = DetectorKind::ep_glrt_ka}, data, steering);
}

DetectionOutcome c_glrt(const DataSet& data, const SteeringSet& steering, const CGlrtConfig& cfg) {
    return evaluate({.kind = DetectorKind::c_glrt}, data, steering, cfg);
}

DetectionOutcome a_glrt(const DataSet& data, const SteeringSet& steering) {
    return evaluate({.kind = DetectorKind::a_glrt}, data, steering);
}

namespace {

struct SingleCellForms {
    cplx vz;
    double vv;
    double zz;
};

SingleCellForms single_cell_forms(std::span<const cplx> z, const CMatrix& secondary, std::span<const cplx> v) {
    if (z.size() != v.size()) {
        throw std::invalid_argument("z and v must have the same length");
    }
    const HermitianFactor f = training_factor(secondary, v.size());
    const CVector wv = whiten(f, v);
    const CVector wz = whiten(f, z);
    return {dot(wv, wz), dot(wv, wv).real(), dot(wz, wz).real()};
}

} // namespace

double kelly(std::span<const cplx> z, const CMatrix& secondary, std::span<const cplx> v) {
    const auto f = single_cell_forms(z, secondary, v);
    return std::norm(f.vz) / (f.vv * (1.0 + f.zz));
}

double amf(std::span<const cplx> z, const CMatrix& secondary, std::span<const cplx> v) {
    const auto f = single_cell_forms(z, secondary, v);
    return std::norm(f.vz) / f.vv;
}

} // namespace risdet
