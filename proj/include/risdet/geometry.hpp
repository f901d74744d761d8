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

#include <stdexcept>

namespace risdet {

inline constexpr double kSpeedOfLight = 299792458.0; // m/s, exact SI value

struct Point2 {
    double x = 0.0;
    double z = 0.0;
};

/// Radar / RIS / target layout in the vertical x-z plane.
struct ScenarioGeometry {
    Point2 radar_pos;
    Point2 ris_pos;
    Point2 target_pos;
    double range_resolution = 0.0; // meters
    double carrier_freq = 0.0;     // Hz

    /// Throws std::invalid_argument on coincident positions or non-positive resolution/frequency.
    void validate() const;
    double wavelength() const { return kSpeedOfLight / carrier_freq; }
};

/// Radar at (-30000, 200) m, RIS at the origin, target at (1000, 500) m, 20 m bins, 3 GHz.
ScenarioGeometry case_study_geometry();

struct PathDistances {
    double d_rt = 0.0; // radar - target
    double d_rs = 0.0; // radar - surface
    double d_st = 0.0; // surface - target
};

/// Round-trip delays of the monostatic (tau1), single-bounce (tau2) and double-bounce (tau3) echoes.
struct PathDelays {
    double tau1 = 0.0;
    double tau2 = 0.0;
    double tau3 = 0.0;
};

/// Bin indices (1-based) of the single- and double-bounce echoes inside a window of
/// `window_size` cells whose first cell holds the monostatic echo.
struct BinLayout {
    int n = 0;
    int m = 0;
    int window_size = 0;
};

/// Incidence angle measured from the RIS normal and reflection angle measured from the
/// x-axis. The two references differ on purpose; both are reported in degrees.
struct RisAngles {
    double theta_si_deg = 0.0;
    double theta_so_deg = 0.0;
};

class InfeasibleGeometry : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class WindowTooSmall : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

PathDistances path_distances(const ScenarioGeometry& geom);

PathDelays compute_delays(const PathDistances& d);

/// True iff d_RS + d_ST - d_RT >= 2 dr, which implies every pairwise delay separation
/// is at least one range cell. The boundary is inclusive.
bool check_feasibility(const PathDistances& d, double range_resolution);

/// Bin offsets are floor(one-way excess path / dr); the monostatic echo sits in bin 1.
BinLayout bin_layout(const PathDelays& delays, double range_resolution, int window_size);

/// Convenience: distances -> delays -> layout for a scenario.
BinLayout bin_layout(const ScenarioGeometry& geom, int window_size);

RisAngles ris_angles(const ScenarioGeometry& geom);

} // namespace risdet
