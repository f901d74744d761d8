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

#include "risdet/special.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <stdexcept>

namespace risdet {

namespace {

// The power series converges quickly here and avoids the 0/0 of the integrand.
constexpr double kSeriesLimit = 2.0;
// Quadrature panel length; a little over one period of sin keeps each panel smooth.
constexpr double kPanel = 8.0;

double series(double z) {
    const double z2 = z * z;
    double term = z; // (-1)^k z^(2k+1) / (2k+1)!
    double sum = z;
    for (int k = 1; k < 40; ++k) {
        term *= -z2 / static_cast<double>((2 * k) * (2 * k + 1));
        const double add = term / static_cast<double>(2 * k + 1);
        sum += add;
        if (std::abs(add) < 1e-17 * std::abs(sum)) {
            break;
        }
    }
    return sum;
}

double sinc(double t) {
    return t == 0.0 ? 1.0 : std::sin(t) / t;
}

} // namespace

double sine_integral(double z) {
    if (!std::isfinite(z)) {
        throw std::invalid_argument("sine_integral: argument must be finite");
    }
    if (z < 0.0) {
        return -sine_integral(-z);
    }
    if (z <= kSeriesLimit) {
        return series(z);
    }
    using boost::math::quadrature::gauss_kronrod;
    double sum = series(kSeriesLimit);
    double a = kSeriesLimit;
    while (a < z) {
        const double b = std::min(z, a + kPanel);
        sum += gauss_kronrod<double, 31>::integrate(sinc, a, b, 10, 1e-14);
        a = b;
    }
    return sum;
}

} // namespace risdet
