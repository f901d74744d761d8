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

#include <cstdint>
#include <random>

namespace risdet {

/// Independent random streams used by the experiments. Each trial of each stream gets its
/// own generator, seeded from (master seed, stream, point, trial) so that results do not
/// depend on how trials are scheduled across threads.
enum class Stream : std::uint64_t {
    calibration = 1,
    false_alarm = 2,
    detection = 3,
    rmse = 4,
    convergence = 5,
    sliding_window = 6,
    scratch = 99,
};

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t master, Stream stream, std::uint64_t point,
                                    std::uint64_t trial) noexcept {
    std::uint64_t h = splitmix64(master);
    h = splitmix64(h ^ static_cast<std::uint64_t>(stream));
    h = splitmix64(h ^ point);
    return splitmix64(h ^ trial);
}

using TrialEngine = std::mt19937_64;

} // namespace risdet
