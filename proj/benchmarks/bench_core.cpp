// Copyright 2026 The nvdress Authors
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

#include <cmath>
#include <vector>

#include "nvdress/analysis/lorentzian.hpp"
#include "nvdress/experiments/cpt.hpp"

namespace {

using namespace nvdress;

// One steady-state spectrum point of the dressed four-level system.
void BM_SteadyPoint(benchmark::State& state) {
  experiments::CptOptions o;
  o.omega_0_mhz = experiments::power_to_rabi(1.0);
  const std::vector<double> grid{o.system.zeeman_mhz + 0.01};
  for (auto _ : state) benchmark::DoNotOptimize(experiments::cpt_spectrum(o, grid));
}
BENCHMARK(BM_SteadyPoint)->Unit(benchmark::kMillisecond);

// One pulsed spectrum point: a 40 us propagation per loop-phase node.
void BM_PulsedPoint(benchmark::State& state) {
  experiments::CptOptions o;
  o.omega_m_mhz = 0.83;
  o.omega_0_mhz = experiments::power_to_rabi(0.1);
  o.mode = experiments::SpectrumMode::Pulsed;
  const std::vector<double> grid{o.system.zeeman_mhz + 0.005};
  for (auto _ : state) benchmark::DoNotOptimize(experiments::cpt_spectrum(o, grid));
}
BENCHMARK(BM_PulsedPoint)->Unit(benchmark::kMillisecond);

// Five-dip Lorentzian fit on a quadratic baseline.
void BM_FiveDipFit(benchmark::State& state) {
  Spectrum s;
  const std::vector<double> centers{-1.4, -0.7, 0.0, 0.7, 1.4};
  for (int i = 0; i < 1001; ++i) {
    const double x = -2.5 + 5.0 * i / 1000.0;
    double y = 1.0 + 0.01 * x * x;
    for (double c : centers) y -= 0.1 * 0.01 / ((x - c) * (x - c) + 0.01);
    s.detunings.push_back(x);
    s.signal.push_back(y);
  }
  analysis::FitOptions opt;
  opt.baseline_order = 2;
  const auto init = analysis::seed_at(s, centers, 0.25);
  for (auto _ : state) benchmark::DoNotOptimize(analysis::fit_lorentzians(s, 5, init, opt));
}
BENCHMARK(BM_FiveDipFit)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
