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

#include "risdet/geometry.hpp"

#include <cmath>
#include <numbers>

namespace risdet {

namespace {

double distance(const Point2& a, const Point2& b) {
    return std::hypot(a.x - b.x, a.z - b.z);
}

bool same_point(const Point2& a, const Point2& b) {
    return a.x == b.x && a.z == b.z;
}

constexpr double rad2deg(double r) { return r * 180.0 / std::numbers::pi; }

} // namespace

void ScenarioGeometry::validate() const {
    if (same_point(radar_pos, ris_pos) || same_point(radar_pos, target_pos) ||
        same_point(ris_pos, target_pos)) {
        throw std::invalid_argument("scenario: radar, RIS and target positions must be distinct");
    }
    if (!(range_resolution > 0.0) || !std::isfinite(range_resolution)) {
        throw std::invalid_argument("scenario: range resolution must be positive");
    }
    if (!(carrier_freq > 0.0) || !std::isfinite(carrier_freq)) {
        throw std::invalid_argument("scenario: carrier frequency must be positive");
    }
}

ScenarioGeometry case_study_geometry() {
    return ScenarioGeometry{
        .radar_pos = {-30000.0, 200.0},
        .ris_pos = {0.0, 0.0},
        .target_pos = {1000.0, 500.0},
        .range_resolution = 20.0,
        .carrier_freq = 3e9,
    };
}

PathDistances path_distances(const ScenarioGeometry& geom) {
    geom.validate();
    return PathDistances{
        .d_rt = distance(geom.radar_pos, geom.target_pos),
        .d_rs = distance(geom.radar_pos, geom.ris_pos),
        .d_st = distance(geom.ris_pos, geom.target_pos),
    };
}

PathDelays compute_delays(const PathDistances& d) {
    if (!(d.d_rt > 0.0 && d.d_rs > 0.0 && d.d_st > 0.0)) {
        throw std::invalid_argument("compute_delays: distances must be positive");
    }
    return PathDelays{
        .tau1 = 2.0 * d.d_rt / kSpeedOfLight,
        .tau2 = (d.d_rt + d.d_st + d.d_rs) / kSpeedOfLight,
        .tau3 = 2.0 * (d.d_rs + d.d_st) / kSpeedOfLight,
    };
}

bool check_feasibility(const PathDistances& d, double range_resolution) {
    return d.d_rs + d.d_st - d.d_rt >= 2.0 * range_resolution;
}

BinLayout bin_layout(const PathDelays& delays, double range_resolution, int window_size) {
    if (!(range_resolution > 0.0)) {
        throw std::invalid_argument("bin_layout: range resolution must be positive");
    }
    // one-way excess path lengths of the tau2 and tau3 echoes
    const double excess2 = kSpeedOfLight * (delays.tau2 - delays.tau1) / 2.0;
    const double excess3 = kSpeedOfLight * (delays.tau3 - delays.tau1) / 2.0;
    // the three pairwise separations of at least one cell (two for tau3 - tau1); the slack
    // absorbs the round trip through the delays
    const double cell = range_resolution * (1.0 - 1e-12);
    if (excess3 < 2.0 * cell || excess2 < cell || excess3 - excess2 < cell) {
        throw InfeasibleGeometry("bin_layout: RIS echoes are not separated from the monostatic echo by two range cells");
    }
    BinLayout layout{
        .n = 1 + static_cast<int>(std::floor(excess2 / range_resolution)),
        .m = 1 + static_cast<int>(std::floor(excess3 / range_resolution)),
        .window_size = window_size,
    };
    if (layout.m > window_size) {
        throw WindowTooSmall("bin_layout: double-bounce echo falls in bin " + std::to_string(layout.m) +
                             " beyond a window of " + std::to_string(window_size));
    }
    return layout;
}

BinLayout bin_layout(const ScenarioGeometry& geom, int window_size) {
    const PathDistances d = path_distances(geom);
    if (!check_feasibility(d, geom.range_resolution)) {
        throw InfeasibleGeometry("scenario violates d_RS + d_ST - d_RT >= 2 dr");
    }
    return bin_layout(compute_delays(d), geom.range_resolution, window_size);
}

RisAngles ris_angles(const ScenarioGeometry& geom) {
    geom.validate();
    const double dx_radar = geom.radar_pos.x - geom.ris_pos.x;
    const double dz_radar = geom.radar_pos.z - geom.ris_pos.z;
    const double dx_target = geom.target_pos.x - geom.ris_pos.x;
    const double dz_target = geom.target_pos.z - geom.ris_pos.z;
    return RisAngles{
        .theta_si_deg = rad2deg(std::atan2(std::abs(dx_radar), dz_radar)),
        // 90 deg - atan(x/z), i.e. the elevation of the RIS->target line above the x-axis
        .theta_so_deg = 90.0 - rad2deg(std::atan2(dx_target, dz_target)),
    };
}

} // namespace risdet
