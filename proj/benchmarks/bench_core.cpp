// Copyright 2026 The qec-sense Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <vector>

#include "qecsense/closedform.hpp"
#include "qecsense/discrete.hpp"
#include "qecsense/inference.hpp"
#include "qecsense/lindblad.hpp"
#include "qecsense/philox.hpp"
#include "qecsense/spectral.hpp"

using namespace qecsense;

namespace {

SensorParams fig_params(double gq) {
  SensorParams p;
  p.gamma_err = 0.1;
  p.gamma_qec = gq;
  return p;
}

// Full 64x64 Liouvillian integration over the default output grid.
void BM_RamseyTrace(benchmark::State& state) {
  const auto p = fig_params(static_cast<double>(state.range(0)));
  const auto taus = uniform_grid(0.0, 20.0, 2000);
  for (auto _ : state) benchmark::DoNotOptimize(ramsey_trace(p, taus));
}
BENCHMARK(BM_RamseyTrace)->Arg(0)->Arg(5)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_ClosedFormTrace(benchmark::State& state) {
  const auto p = fig_params(5.0);
  const auto taus = uniform_grid(0.0, 20.0, 2000);
  for (auto _ : state) {
    double s = 0.0;
    for (double t : taus) s += expectation_full(p, t);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_ClosedFormTrace);

void BM_Gradient(benchmark::State& state) {
  const auto p = fig_params(5.0);
  for (auto _ : state) benchmark::DoNotOptimize(expectation_full_gradient(p, 3.7));
}
BENCHMARK(BM_Gradient);

void BM_Spectrum(benchmark::State& state) {
  const auto tr = ramsey_trace(fig_params(5.0), uniform_grid(0.0, 20.0, 2000));
  const int pad = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(spectrum(tr, pad));
}
BENCHMARK(BM_Spectrum)->Arg(1)->Arg(8);

void BM_IterateCycles(benchmark::State& state) {
  const CycleSpec spec{static_cast<unsigned long long>(state.range(0)), 0.2, NoiseModel::realistic(0.02)};
  const SensorParams p;
  const DensityMatrix rho0 = ramsey_state(3);
  for (auto _ : state) benchmark::DoNotOptimize(iterate_cycles(spec, p, rho0));
}
BENCHMARK(BM_IterateCycles)->Arg(20)->Arg(100);

void BM_BinomialForm(benchmark::State& state) {
  const CycleSpec spec{static_cast<unsigned long long>(state.range(0)), 0.2, NoiseModel::optimal(0.06)};
  const SensorParams p;
  const DensityMatrix rho_tau = ideal_state(p, ramsey_state(3), spec.tau());
  for (auto _ : state) benchmark::DoNotOptimize(binomial_form(spec, p, rho_tau));
}
BENCHMARK(BM_BinomialForm)->Arg(20)->Arg(100);

void BM_Philox(benchmark::State& state) {
  Philox4x32 g(20260101, 7);
  for (auto _ : state) benchmark::DoNotOptimize(g.uniform());
}
BENCHMARK(BM_Philox);

void BM_SampleShots(benchmark::State& state) {
  const auto p = fig_params(16.6);
  const auto model = [&](double t) { return expectation_full(p, t); };
  for (auto _ : state) benchmark::DoNotOptimize(sample_shots(model, 10.0, 10'000, 1, 2));
}
BENCHMARK(BM_SampleShots);

// One repetition of the CRB experiment: grid table is built once, fits reuse it.
void BM_GridFit(benchmark::State& state) {
  SensorParams truth;
  truth.gamma_err = 0.2;
  truth.gamma_qec = 16.6;
  std::vector<double> taus;
  for (int i = 0; i < 40; ++i) taus.push_back(20.0 * (i + 1) / 40.0);
  const GridFitter fitter(ExpectationModel(ModelKind::proposed_full, 16.6), taus, FitBracket::around(1.0, 0.2));
  std::vector<double> means;
  std::vector<std::size_t> shots(taus.size(), 250);
  for (std::size_t i = 0; i < taus.size(); ++i) {
    means.push_back(sample_shots([&](double t) { return expectation_full(truth, t); }, taus[i], 250, 3, i).mean());
  }
  for (auto _ : state) benchmark::DoNotOptimize(fitter.fit(means, shots));
}
BENCHMARK(BM_GridFit)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
