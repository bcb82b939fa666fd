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


#include "nvdress/noise/bath.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "nvdress/detail/parallel.hpp"
#include "nvdress/errors.hpp"

namespace nvdress::noise {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::mt19937_64 engine_for(std::uint64_t seed, std::size_t index) {
  return std::mt19937_64(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(index) + 1)));
}

std::string with_index(const char* what, std::size_t index) {
  std::ostringstream msg;
  msg << "sample " << index << ": " << what;
  return msg.str();
}

}  // namespace

NoiseModel NoiseModel::none() { return {}; }

NoiseModel NoiseModel::static_gaussian(double sigma_n, std::uint64_t seed, int n_samples) {
  NoiseModel m;
  m.spin = SpinNoise::StaticGaussian;
  m.sigma_n_mhz = sigma_n;
  m.seed = seed;
  m.n_samples = n_samples;
  return m;
}

NoiseModel NoiseModel::ornstein_uhlenbeck(double sigma_n, double tau_c, std::uint64_t seed,
                                          int n_samples) {
  NoiseModel m = static_gaussian(sigma_n, seed, n_samples);
  m.spin = SpinNoise::OrnsteinUhlenbeck;
  m.correlation_time_us = tau_c;
  return m;
}

NoiseModel NoiseModel::static_gaussian_optical(double sigma_opt, std::uint64_t seed,
                                               int n_samples) {
  NoiseModel m;
  m.sigma_opt_mhz = sigma_opt;
  m.seed = seed;
  m.n_samples = n_samples;
  return m;
}

void NoiseModel::validate() const {
  if (!(sigma_n_mhz >= 0.0) || !(sigma_opt_mhz >= 0.0)) {
    throw InvalidArgument("noise: sigma values must be >= 0");
  }
  if (!(correlation_time_us > 0.0)) throw InvalidArgument("noise: correlation time must be > 0");
  if (n_samples < 1) throw InvalidArgument("noise: n_samples must be >= 1");
}

double BathSample::delta_n_at(double t_us) const {
  if (delta_n_trajectory.empty()) return delta_n_mhz;
  if (t_us <= 0.0) return delta_n_trajectory.front();
  const double pos = t_us / trajectory_step_us;
  const auto k = static_cast<std::size_t>(pos);
  if (k + 1 >= delta_n_trajectory.size()) return delta_n_trajectory.back();
  const double f = pos - static_cast<double>(k);
  return (1.0 - f) * delta_n_trajectory[k] + f * delta_n_trajectory[k + 1];
}

BathSample sample(const NoiseModel& model, std::size_t index, const SampleWindow& window) {
  model.validate();
  if (index >= static_cast<std::size_t>(model.n_samples)) {
    throw InvalidArgument(with_index("index out of range", index));
  }
  BathSample s;
  s.index = index;
  auto rng = engine_for(model.seed, index);
  std::normal_distribution<double> normal(0.0, 1.0);

  // Draw order is fixed: delta_N(0), delta_opt, then OU increments.
  const double z_spin = normal(rng);
  const double z_opt = normal(rng);
  if (model.spin != SpinNoise::None) s.delta_n_mhz = model.sigma_n_mhz * z_spin;
  s.delta_opt_mhz = model.sigma_opt_mhz * z_opt;

  if (model.time_dependent()) {
    if (!(window.step_us > 0.0) || !(window.duration_us >= window.step_us)) {
      throw InvalidArgument("noise: invalid sample window");
    }
    const auto points =
        static_cast<std::size_t>(std::ceil(window.duration_us / window.step_us - 1e-9)) + 1;
    const double a = std::exp(-window.step_us / model.correlation_time_us);
    const double kick = model.sigma_n_mhz * std::sqrt(-std::expm1(-2.0 * window.step_us /
                                                                  model.correlation_time_us));
    s.trajectory_step_us = window.step_us;
    s.delta_n_trajectory.resize(points);
    s.delta_n_trajectory[0] = s.delta_n_mhz;
    for (std::size_t k = 1; k < points; ++k) {
      s.delta_n_trajectory[k] = a * s.delta_n_trajectory[k - 1] + kick * normal(rng);
    }
  }
  return s;
}

Spectrum ensemble_average(const NoiseModel& model, const SpectrumRunner& runner,
                          const EnsembleOptions& options) {
  model.validate();
  const auto n = static_cast<std::size_t>(model.n_samples);
  std::vector<Spectrum> results(n);
  detail::parallel_for(n, std::min(options.workers, model.n_samples), [&](std::size_t i) {
    try {
      results[i] = runner(sample(model, i, options.window));
      results[i].validate();
    } catch (const InvalidArgument& e) {
      throw InvalidArgument(with_index(e.what(), i));
    } catch (const ConvergenceError& e) {
      throw ConvergenceError(with_index(e.what(), i));
    } catch (const NonUniqueSteadyState& e) {
      throw NonUniqueSteadyState(with_index(e.what(), i));
    } catch (const NumericalError& e) {
      throw NumericalError(with_index(e.what(), i));
    } catch (const std::exception& e) {
      throw Error(with_index(e.what(), i));
    }
  });

  const std::size_t m = results[0].size();
  for (std::size_t i = 1; i < n; ++i) {
    if (results[i].detunings != results[0].detunings) {
      throw InvalidArgument(with_index("runner returned a different grid", i));
    }
  }

  Spectrum out;
  out.detunings = results[0].detunings;
  out.metadata = results[0].metadata;
  out.signal.assign(m, 0.0);
  out.standard_error.assign(m, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < m; ++k) out.signal[k] += results[i].signal[k];
  }
  for (auto& s : out.signal) s /= static_cast<double>(n);
  if (n > 1) {
    for (std::size_t k = 0; k < m; ++k) {
      double ss = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double d = results[i].signal[k] - out.signal[k];
        ss += d * d;
      }
      out.standard_error[k] = std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
    }
  }
  out.metadata["noise.n_samples"] = std::to_string(model.n_samples);
  out.metadata["noise.seed"] = std::to_string(model.seed);
  return out;
}

double calibrate_sigma(double target, const std::function<double(double)>& fwhm_of_sigma,
                       const CalibrationOptions& options) {
  if (!(target > 0.0)) throw InvalidArgument("calibrate_sigma: target must be > 0");
  const double tol = options.relative_tolerance * target;
  const double floor = fwhm_of_sigma(0.0);
  if (std::abs(floor - target) <= tol) return 0.0;
  if (floor > target) {
    throw ConvergenceError("calibrate_sigma: noiseless width already exceeds the target");
  }

  double lo = 0.0;
  double hi = target / (2.0 * std::sqrt(2.0 * std::log(2.0)));
  double f_hi = fwhm_of_sigma(hi);
  while (f_hi < target - tol) {
    lo = hi;
    hi *= 2.0;
    if (hi > options.max_sigma_factor * target) {
      throw ConvergenceError("calibrate_sigma: target not bracketed");
    }
    f_hi = fwhm_of_sigma(hi);
  }
  if (std::abs(f_hi - target) <= tol) return hi;

  for (int it = 0; it < options.max_iterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double f = fwhm_of_sigma(mid);
    if (std::abs(f - target) <= tol) return mid;
    (f < target ? lo : hi) = mid;
  }
  throw ConvergenceError("calibrate_sigma: bisection did not reach the tolerance");
}

}  // namespace nvdress::noise
