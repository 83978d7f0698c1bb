// Copyright 2026 The dptune Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include <benchmark/benchmark.h>

#include "dptune/calibration.hpp"
#include "dptune/quadrature.hpp"
#include "dptune/simulator.hpp"
#include "dptune/subsampling.hpp"
#include "dptune/tuning.hpp"

namespace dptune {
namespace {

void BM_SubsampleCurve(benchmark::State& state) {
  RdpCurve base = GaussianCurve(2.0, 1.0, AlphaGrid::Default());
  for (auto _ : state) {
    benchmark::DoNotOptimize(SubsampleCurve(base, 0.01));
  }
}
BENCHMARK(BM_SubsampleCurve);

void BM_TuningPipeline(benchmark::State& state) {
  RdpCurve base =
      MechanismSpec::Composed(MechanismSpec::SubsampledGaussian(2.0, 0.01), 5000)
          .Curve(AlphaGrid::Integers(2, 64));
  for (auto _ : state) {
    RdpCurve tuning = TuningRdp(base, 15.0);
    benchmark::DoNotOptimize(RdpToDp(Variant1Curve(tuning, base, 0.1), 1e-5));
  }
}
BENCHMARK(BM_TuningPipeline);

void BM_RdpToDp(benchmark::State& state) {
  RdpCurve base = GaussianCurve(1.3, 1.0, AlphaGrid::Default());
  for (auto _ : state) {
    benchmark::DoNotOptimize(RdpToDp(base, 1e-5));
  }
}
BENCHMARK(BM_RdpToDp);

void BM_CalibrateSigma(benchmark::State& state) {
  const PrivacyTarget target{2.0, 1e-5};
  for (auto _ : state) {
    benchmark::DoNotOptimize(CalibrateSigma(0.01, 1000, target));
  }
}
BENCHMARK(BM_CalibrateSigma);

void BM_QuadratureOracle(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(RenyiQuadratureOracle(2.0, 0.01, 8.0));
  }
}
BENCHMARK(BM_QuadratureOracle);

void BM_TrainCandidate(benchmark::State& state) {
  Dataset data = MakeTask(SyntheticTask{1000, 2, 3.0, 7});
  HyperParams params{0.5, 1.0, 0.05, 100, Optimizer::kSgd};
  for (auto _ : state) {
    benchmark::DoNotOptimize(TrainCandidate(data, params, 1.0, 42));
  }
}
BENCHMARK(BM_TrainCandidate);

}  // namespace
}  // namespace dptune

BENCHMARK_MAIN();
