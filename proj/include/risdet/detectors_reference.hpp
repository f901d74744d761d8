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

#include "risdet/detectors.hpp"

namespace risdet::reference {

// Direct transcriptions of the decision statistics: every sample covariance, residual
// matrix and cyclic-update matrix C is formed explicitly at N x N and factored on its own.
// Slow, serial, and kept as the cross-check for the Gram-space kernels in detectors.cpp.

DetectionOutcome ep_glrt_km(const DataSet& data, const SteeringSet& steering, int variant);
DetectionOutcome ep_glrt_ka(const DataSet& data, const SteeringSet& steering);
DetectionOutcome c_glrt(const DataSet& data, const SteeringSet& steering, const CGlrtConfig& cfg = {});
DetectionOutcome a_glrt(const DataSet& data, const SteeringSet& steering);

CGlrtTrace c_glrt_trace(const DataSet& data, const SteeringSet& steering, int n, int m, const CGlrtConfig& cfg,
                        bool stop_early = true);

DetectionOutcome evaluate(const DetectorSpec& spec, const DataSet& data, const SteeringSet& steering,
                          const CGlrtConfig& cfg = {});

} // namespace risdet::reference
