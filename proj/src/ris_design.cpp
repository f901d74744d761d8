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

#include "risdet/ris_design.hpp"

#include "risdet/geometry.hpp"
#include "risdet/special.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace risdet {

namespace {

constexpr double kPi = std::numbers::pi;

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw std::invalid_argument(std::string(what) + " must be positive and finite");
    }
}

double spread(double d) { return 4.0 * kPi * d * d; }

} // namespace

double deg_to_rad(double deg) { return deg * kPi / 180.0; }

void LinkBudget::validate() const {
    require_positive(p_t, "link budget P_T");
    require_positive(wavelength, "link budget wavelength");
    require_positive(sigma_rtr, "link budget sigma_RTR");
    require_positive(sigma_str, "link budget sigma_STR");
    require_positive(sigma_sts, "link budget sigma_STS");
    require_positive(d_rt, "link budget d_RT");
    require_positive(d_rs, "link budget d_RS");
    require_positive(d_st, "link budget d_ST");
    if (!std::isfinite(g_t_dbi)) {
        throw std::invalid_argument("link budget G_T must be finite");
    }
}

double LinkBudget::gain_linear() const { return std::pow(10.0, g_t_dbi / 10.0); }

double LinkBudget::effective_area() const { return wavelength * wavelength * gain_linear() / (4.0 * kPi); }

LinkBudget case_study_link_budget() {
    const ScenarioGeometry geom = case_study_geometry();
    const PathDistances d = path_distances(geom);
    LinkBudget lb; // keeps the nominal 10 cm wavelength rather than c / 3 GHz
    lb.d_rt = d.d_rt;
    lb.d_rs = d.d_rs;
    lb.d_st = d.d_st;
    return lb;
}

double received_power(EchoPath path, const LinkBudget& lb, double sigma_ris) {
    lb.validate();
    require_positive(sigma_ris, "sigma_RIS");
    const double ptg = lb.p_t * lb.gain_linear();
    const double a_eff = lb.effective_area();
    switch (path) {
    case EchoPath::rtr:
        return ptg * lb.sigma_rtr * a_eff / (std::pow(4.0 * kPi, 2) * std::pow(lb.d_rt, 4));
    case EchoPath::rstr:
        return ptg / spread(lb.d_rs) * sigma_ris / spread(lb.d_st) * lb.sigma_str * a_eff / spread(lb.d_rt);
    case EchoPath::rstsr:
        return ptg / std::pow(spread(lb.d_rs), 2) * sigma_ris * sigma_ris / std::pow(spread(lb.d_st), 2) *
               lb.sigma_sts * a_eff;
    }
    throw std::invalid_argument("received_power: unknown path");
}

double to_dbsm(double sigma_m2) { return 10.0 * std::log10(sigma_m2); }

double from_dbsm(double sigma_dbsm) { return std::pow(10.0, sigma_dbsm / 10.0); }

double crossover_sigma(EchoPath path, const LinkBudget& lb) {
    const double p_los = received_power(EchoPath::rtr, lb, 1.0);
    switch (path) {
    case EchoPath::rstr:
        return p_los / received_power(EchoPath::rstr, lb, 1.0);
    case EchoPath::rstsr:
        return std::sqrt(p_los / received_power(EchoPath::rstsr, lb, 1.0));
    case EchoPath::rtr:
        break;
    }
    throw std::invalid_argument("crossover_sigma: the line-of-sight path has no crossover");
}

double combined_crossover_sigma(const LinkBudget& lb) {
    // a s^2 + b s = c with a, b the unit-RCS powers of the two surface paths
    const double a = received_power(EchoPath::rstsr, lb, 1.0);
    const double b = received_power(EchoPath::rstr, lb, 1.0);
    const double c = received_power(EchoPath::rtr, lb, 1.0);
    return 2.0 * c / (b + std::sqrt(b * b + 4.0 * a * c));
}

std::vector<LinkBudgetRow> link_budget_curve(const LinkBudget& lb, std::span<const double> sigma_dbsm) {
    std::vector<LinkBudgetRow> rows;
    rows.reserve(sigma_dbsm.size());
    for (double s_db : sigma_dbsm) {
        const double s = from_dbsm(s_db);
        rows.push_back({s_db, received_power(EchoPath::rtr, lb, s), received_power(EchoPath::rstr, lb, s),
                        received_power(EchoPath::rstsr, lb, s)});
    }
    return rows;
}

double uniform_rcs(double side_length, double wavelength) {
    require_positive(side_length, "side length");
    require_positive(wavelength, "wavelength");
    return 4.0 * kPi * std::pow(side_length, 4) / (wavelength * wavelength);
}

ApertureSize min_size(double sigma, double wavelength) {
    require_positive(sigma, "sigma");
    require_positive(wavelength, "wavelength");
    ApertureSize out;
    out.side_length = std::pow(sigma * wavelength * wavelength / (4.0 * kPi), 0.25);
    // a side that is an exact multiple of lambda/2 must not gain an element from rounding
    out.elements = static_cast<int>(std::ceil(2.0 * out.side_length / wavelength - 1e-9));
    out.hpbw_deg = 2.0 * 50.8 / out.elements;
    return out;
}

double sinc_width(double phi0_rad, double wavelength) {
    require_positive(phi0_rad, "phi0");
    require_positive(wavelength, "wavelength");
    return wavelength / phi0_rad;
}

double sinc_rcs(double side_length, double b, double wavelength) {
    require_positive(side_length, "side length");
    require_positive(b, "sinc width b");
    require_positive(wavelength, "wavelength");
    const double si = sine_integral(kPi * side_length / (2.0 * b));
    return 16.0 * b * b * side_length * side_length / (kPi * wavelength * wavelength) * si * si;
}

double sinc_rcs_asymptote(double side_length, double b, double wavelength) {
    require_positive(side_length, "side length");
    require_positive(b, "sinc width b");
    require_positive(wavelength, "wavelength");
    return 4.0 * kPi * b * b * side_length * side_length / (wavelength * wavelength);
}

double chirp_rate(double phi0_rad, double wavelength, double side_length) {
    require_positive(phi0_rad, "phi0");
    require_positive(wavelength, "wavelength");
    require_positive(side_length, "side length");
    return phi0_rad / (wavelength * side_length);
}

double lfm_rcs(double side_length, double k_x, double wavelength) {
    require_positive(side_length, "side length");
    require_positive(k_x, "chirp rate K_x");
    require_positive(wavelength, "wavelength");
    return 8.0 * kPi * side_length * side_length / (wavelength * wavelength * k_x);
}

void TaperingSpec::validate() const {
    require_positive(side_length, "side length");
    require_positive(wavelength, "wavelength");
    if (const auto* s = std::get_if<SincTaper>(&taper)) {
        require_positive(s->b, "sinc width b");
    } else if (const auto* l = std::get_if<LfmTaper>(&taper)) {
        require_positive(l->k_x, "chirp rate K_x");
    }
}

double boresight_rcs(const TaperingSpec& spec) {
    spec.validate();
    if (const auto* s = std::get_if<SincTaper>(&spec.taper)) {
        return sinc_rcs(spec.side_length, s->b, spec.wavelength);
    }
    if (const auto* l = std::get_if<LfmTaper>(&spec.taper)) {
        return lfm_rcs(spec.side_length, l->k_x, spec.wavelength);
    }
    return uniform_rcs(spec.side_length, spec.wavelength);
}

std::vector<TaperingRow> tapering_comparison(double wavelength, double phi0_deg, std::span<const double> side_lengths) {
    const double phi0 = deg_to_rad(phi0_deg);
    const double b = sinc_width(phi0, wavelength);
    std::vector<TaperingRow> rows;
    rows.reserve(side_lengths.size());
    for (double l : side_lengths) {
        rows.push_back({l, uniform_rcs(l, wavelength), sinc_rcs(l, b, wavelength),
                        lfm_rcs(l, chirp_rate(phi0, wavelength, l), wavelength)});
    }
    return rows;
}

} // namespace risdet
