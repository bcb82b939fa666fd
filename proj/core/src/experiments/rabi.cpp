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


#include "nvdress/experiments/rabi.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "nvdress/errors.hpp"
#include "nvdress/nv/hamiltonian.hpp"
#include "nvdress/quantum/propagate.hpp"

namespace nvdress::experiments {
namespace {

constexpr int kPadding = 16;

double power_at(std::span<const double> v, double mean, double f, double dt) {
  std::complex<double> acc = 0.0;
  const std::complex<double> step = std::polar(1.0, -2.0 * std::numbers::pi * f * dt);
  std::complex<double> phase = 1.0;
  for (double x : v) {
    acc += (x - mean) * phase;
    phase *= step;
  }
  return std::norm(acc);
}

}  // namespace

double dominant_frequency(std::span<const double> values, double dt) {
  const std::size_t n = values.size();
  if (n < 4 || !(dt > 0.0)) throw InvalidArgument("dominant_frequency: need >= 4 samples and dt > 0");
  double mean = 0.0;
  for (double x : values) mean += x;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double x : values) var += (x - mean) * (x - mean);
  if (var / static_cast<double>(n) < 1e-20) throw NumericalError("dominant_frequency: flat trace");

  const double duration = dt * static_cast<double>(n);
  const double df = 1.0 / (duration * kPadding);
  const auto bins = static_cast<long>(n) * kPadding / 2;
  long best = 0;
  double best_power = -1.0;
  for (long k = 1; k < bins; ++k) {
    const double p = power_at(values, mean, static_cast<double>(k) * df, dt);
    if (p > best_power) {
      best_power = p;
      best = k;
    }
  }
  const double pm = power_at(values, mean, static_cast<double>(best - 1) * df, dt);
  const double pp = power_at(values, mean, static_cast<double>(best + 1) * df, dt);
  const double curvature = pm - 2.0 * best_power + pp;
  const double shift = curvature < 0.0 ? 0.5 * (pm - pp) / curvature : 0.0;
  const double f = (static_cast<double>(best) + shift) * df;
  if (f * duration < 1.0) {
    throw NumericalError("dominant_frequency: trace shorter than one oscillation period");
  }
  return f;
}

RabiTrace rabi_trace(const nv::SystemConfig& system, const nv::RelaxationRates& rates,
                     const nv::DriveField& drive, double duration_us, double step_us) {
  drive.validate();
  nv::SystemConfig cfg = system;
  cfg.hyperfine = false;
  const std::array<nv::DriveField, 1> drives{drive};
  const auto h = nv::build_hamiltonian(cfg, drives, 0.0, 0.0);
  const auto channels = nv::collapse_operators(cfg, rates);
  quantum::PropagationOptions opt;
  opt.observables.push_back(quantum::Operator::projector(cfg.dim(), cfg.index(drive.upper)));
  opt.state_stride = 0;
  const auto traj = quantum::propagate(h.static_part, h.oscillating, channels,
                                       quantum::DensityMatrix::pure(cfg.dim(), cfg.index(drive.lower)),
                                       duration_us, step_us, opt);
  RabiTrace out;
  out.times = traj.times;
  for (const auto& v : traj.observables[0]) out.population.push_back(v.real());
  out.rabi_mhz = dominant_frequency(out.population, traj.step);
  return out;
}

}  // namespace nvdress::experiments
