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


#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "nvdress/spectrum.hpp"

namespace nvdress::noise {

enum class SpinNoise {
  None,
  /// delta_N drawn once per repetition from N(0, sigma_n^2).
  StaticGaussian,
  /// Stationary Ornstein-Uhlenbeck delta_N(t) with variance sigma_n^2.
  OrnsteinUhlenbeck,
};

/// Classical bath acting on the spin (delta_N) and on the optical
/// transition (delta_opt, static per repetition). Frequencies in MHz.
struct NoiseModel {
  SpinNoise spin = SpinNoise::None;
  double sigma_n_mhz = 0.0;
  double correlation_time_us = 1.0;
  double sigma_opt_mhz = 0.0;
  std::uint64_t seed = 0;
  int n_samples = 1;

  static NoiseModel none();
  static NoiseModel static_gaussian(double sigma_n, std::uint64_t seed, int n_samples);
  static NoiseModel ornstein_uhlenbeck(double sigma_n, double tau_c, std::uint64_t seed,
                                       int n_samples);
  static NoiseModel static_gaussian_optical(double sigma_opt, std::uint64_t seed, int n_samples);

  void validate() const;
  bool time_dependent() const { return spin == SpinNoise::OrnsteinUhlenbeck && sigma_n_mhz > 0.0; }
};

/// Time grid on which a dynamic delta_N(t) is realized.
struct SampleWindow {
  double duration_us = 40.0;
  double step_us = 0.02;
};

/// One realization of the bath.
struct BathSample {
  std::size_t index = 0;
  /// Static shift, or delta_N(0) for a trajectory.
  double delta_n_mhz = 0.0;
  double delta_opt_mhz = 0.0;
  /// delta_N at t_k = k * trajectory_step_us; empty for static noise.
  std::vector<double> delta_n_trajectory;
  double trajectory_step_us = 0.0;

  bool time_dependent() const { return !delta_n_trajectory.empty(); }
  /// Linear interpolation of the trajectory, held constant past its ends.
  double delta_n_at(double t_us) const;
};

/// Deterministic in (seed, index): each index seeds its own generator, so
/// samples can be produced in any order or concurrently.
BathSample sample(const NoiseModel& model, std::size_t index, const SampleWindow& window = {});

using SpectrumRunner = std::function<Spectrum(const BathSample&)>;

struct EnsembleOptions {
  SampleWindow window;
  /// Worker threads; values < 1 mean one.
  int workers = 1;
};

/// Pointwise mean of runner(sample(model, i)) over i < n_samples, with the
/// standard error of the mean per point (zeros when n_samples == 1).
/// Summation runs in index order, so the result does not depend on workers.
/// Metadata of sample 0 is kept and the ensemble keys are added.
Spectrum ensemble_average(const NoiseModel& model, const SpectrumRunner& runner,
                          const EnsembleOptions& options = {});

struct CalibrationOptions {
  double relative_tolerance = 0.02;
  int max_iterations = 60;
  /// Largest sigma_N tried while bracketing, as a multiple of the target.
  double max_sigma_factor = 4.0;
};

/// Finds sigma_N >= 0 with |fwhm_of_sigma(sigma_N) - target| <= tol * target
/// by bracketing and bisection. fwhm_of_sigma should be monotone; fixing the
/// seed of any Monte Carlo inside it keeps it so. Returns 0 when the
/// noiseless width already meets the target; throws ConvergenceError when
/// the target cannot be bracketed.
double calibrate_sigma(double target_fwhm_mhz, const std::function<double(double)>& fwhm_of_sigma,
                       const CalibrationOptions& options = {});

}  // namespace nvdress::noise
