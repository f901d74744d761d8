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

#include <span>
#include <variant>
#include <vector>

namespace risdet {

/// Monostatic line of sight, single bounce off the surface, double bounce.
enum class EchoPath { rtr, rstr, rstsr };

struct LinkBudget {
    double p_t = 1e4;         // W
    double g_t_dbi = 37.0;
    double wavelength = 0.1;  // m
    double sigma_rtr = 1e-2;  // target RCS seen on each path, m^2
    double sigma_str = 1.0;
    double sigma_sts = 1.0;
    double d_rt = 0.0;        // m
    double d_rs = 0.0;
    double d_st = 0.0;

    void validate() const;
    double gain_linear() const;
    /// lambda^2 G_T / (4 pi)
    double effective_area() const;
};

/// Default powers and RCS values with the distances of case_study_geometry().
LinkBudget case_study_link_budget();

/// Received power in W for a surface of RCS sigma_ris (m^2).
double received_power(EchoPath path, const LinkBudget& lb, double sigma_ris);

double to_dbsm(double sigma_m2);
double from_dbsm(double sigma_dbsm);

/// Surface RCS (m^2) at which `path` delivers the same power as the line-of-sight echo.
/// Throws std::invalid_argument for EchoPath::rtr.
double crossover_sigma(EchoPath path, const LinkBudget& lb);
/// Same, for the summed power of both surface paths.
double combined_crossover_sigma(const LinkBudget& lb);

struct LinkBudgetRow {
    double sigma_dbsm = 0.0;
    double p_rtr = 0.0; // W
    double p_rstr = 0.0;
    double p_rstsr = 0.0;
};

std::vector<LinkBudgetRow> link_budget_curve(const LinkBudget& lb, std::span<const double> sigma_dbsm);

/// 4 pi L^4 / lambda^2: perfectly phased square aperture of side L.
double uniform_rcs(double side_length, double wavelength);

struct ApertureSize {
    double side_length = 0.0; // m
    int elements = 0;         // per side, half-wavelength spacing
    double hpbw_deg = 0.0;
};

/// Smallest uniform aperture reaching `sigma` (m^2) and its half-power beamwidth.
ApertureSize min_size(double sigma, double wavelength);

/// b = lambda / phi0 for a beamwidth phi0 in radians.
double sinc_width(double phi0_rad, double wavelength);
/// 16 b^2 L^2 / (pi lambda^2) Si^2(pi L / (2 b))
double sinc_rcs(double side_length, double b, double wavelength);
/// 4 pi b^2 L^2 / lambda^2, the L -> infinity form of sinc_rcs
double sinc_rcs_asymptote(double side_length, double b, double wavelength);

/// K_x = phi0 / (lambda L), phi0 in radians.
double chirp_rate(double phi0_rad, double wavelength, double side_length);
/// 8 pi L^2 / (lambda^2 K_x), stationary-phase estimate
double lfm_rcs(double side_length, double k_x, double wavelength);

struct UniformTaper {};
struct SincTaper {
    double b = 0.0; // m
};
struct LfmTaper {
    double k_x = 0.0; // 1/m^2
};

struct TaperingSpec {
    std::variant<UniformTaper, SincTaper, LfmTaper> taper;
    double side_length = 0.0;
    double wavelength = 0.0;

    void validate() const;
};

double boresight_rcs(const TaperingSpec& spec);

struct TaperingRow {
    double side_length = 0.0; // m
    double uniform = 0.0;     // m^2
    double sinc = 0.0;
    double lfm = 0.0;
};

/// The three boresight RCS values on a grid of side lengths, for a beamwidth phi0 in degrees.
std::vector<TaperingRow> tapering_comparison(double wavelength, double phi0_deg, std::span<const double> side_lengths);

double deg_to_rad(double deg);

} // namespace risdet
