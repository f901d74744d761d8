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

// Fast Gram-space detectors against the direct reference forms, and the Monte Carlo
// threshold sweep run serially against the OpenMP map.

#include "risdet/detectors.hpp"
#include "risdet/detectors_reference.hpp"
#include "risdet/montecarlo.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace risdet;

struct Fixture {
    ModelConfig model;
    SteeringSet steering;
    DataSet data;

    Fixture() : steering(model.steering()) {
        data = synthesize(Hypothesis::h0, TargetParams{{}, model.layout()}, model.covariance(), steering,
                          model.primary_cells, model.secondary_cells, 12345);
    }
};

const Fixture& fixture() {
    static const Fixture f;
    return f;
}

DetectorSpec spec_of(int index) { return proposed_detectors().at(static_cast<std::size_t>(index)); }

void BM_DetectorFast(benchmark::State& state) {
    const Fixture& f = fixture();
    const DetectorSpec spec = spec_of(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(evaluate(spec, f.data, f.steering).statistic);
    }
    state.SetLabel(spec.name());
}

void BM_DetectorReference(benchmark::State& state) {
    const Fixture& f = fixture();
    const DetectorSpec spec = spec_of(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(reference::evaluate(spec, f.data, f.steering).statistic);
    }
    state.SetLabel(spec.name());
}

// Every proposed detector on one shared workspace, as the Monte Carlo loop does.
void BM_AllDetectorsShared(benchmark::State& state) {
    const Fixture& f = fixture();
    const auto specs = proposed_detectors();
    for (auto _ : state) {
        DetectionWorkspace ws(f.data, f.steering);
        for (const auto& s : specs) {
            benchmark::DoNotOptimize(ws.evaluate(s).statistic);
        }
    }
}

void calibration(benchmark::State& state, const ExecutionPolicy& policy) {
    ModelConfig model;
    ExperimentConfig exp = profile_defaults(Profile::desk);
    exp.pfa = 1e-2;
    exp.trials_cal = state.range(0);
    const auto specs = proposed_detectors();
    for (auto _ : state) {
        benchmark::DoNotOptimize(calibrate_thresholds(specs, model, exp, policy).entries().size());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_CalibrateSerial(benchmark::State& state) { calibration(state, ExecutionPolicy::serial()); }
void BM_CalibrateOpenMP(benchmark::State& state) { calibration(state, ExecutionPolicy{}); }

} // namespace

BENCHMARK(BM_DetectorFast)->DenseRange(0, 4);
BENCHMARK(BM_DetectorReference)->DenseRange(0, 4);
BENCHMARK(BM_AllDetectorsShared);
BENCHMARK(BM_CalibrateSerial)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CalibrateOpenMP)->Arg(2000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
