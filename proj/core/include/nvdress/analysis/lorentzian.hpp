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

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "nvdress/spectrum.hpp"

namespace nvdress::analysis {

enum class PeakSign { Dip, Peak };

struct LorentzianPeak {
  double center = 0.0;     // MHz
  double fwhm = 0.0;       // MHz
  double amplitude = 0.0;  // signal units, magnitude at the center
  PeakSign sign = PeakSign::Dip;

  /// Integrated area magnitude, pi/2 * amplitude * fwhm.
  double area() const;
};

/// baseline + slope u + curvature u^2 + sum_k s_k A_k (w_k/2)^2 / ((x - c_k)^2 + (w_k/2)^2)
/// with u = x - reference and s = -1 for dips.
struct LorentzianModel {
  double baseline = 0.0;
  std::vector<LorentzianPeak> peaks;
  double slope = 0.0;
  double curvature = 0.0;
  double reference = 0.0;

  double operator()(double x) const;
  void validate() const;
};

/// Parameter order in the covariance: baseline, then (center, fwhm,
/// amplitude) for each peak, then slope and curvature when fitted.
struct FitResult {
  LorentzianModel model;
  Eigen::MatrixXd covariance;
  double residual_rms = 0.0;
  double gradient_norm = 0.0;
  double condition_number = 0.0;
  bool converged = false;
  int iterations = 0;
  std::string message;
};

struct FitOptions {
  int max_iterations = 500;
  double relative_cost_tolerance = 1e-10;
  double initial_damping = 1e-3;
  /// Weight points by 1/stderr^2 when the spectrum carries errors.
  bool use_standard_error = false;
  /// 0: constant baseline; 1 adds a slope, 2 also a curvature, both about
  /// the grid midpoint.
  int baseline_order = 0;
  /// Tie every peak to one common fwhm, started from the mean initial
  /// width. The covariance stays in the per-peak layout.
  bool shared_width = false;
};

/// Levenberg-Marquardt fit of n_peaks Lorentzians on a free constant
/// baseline, started from `init`. Damping is multiplied by 10 after a
/// rejected step and divided by 10 after an accepted one; iteration stops
/// once an accepted step changes the cost by less than the relative
/// tolerance. Widths are kept above the smallest grid spacing. Throws
/// InvalidArgument on bad input and NumericalError when the normal
/// equations are singular.
FitResult fit_lorentzians(const Spectrum& spectrum, std::size_t n_peaks,
                          const LorentzianModel& init, const FitOptions& options = {});

struct Measured {
  double value = 0.0;
  double error = 0.0;
};

/// Width of peak `which` with its standard error from the covariance.
Measured fwhm_of(const FitResult& fit, std::size_t which);
Measured center_of(const FitResult& fit, std::size_t which);
Measured amplitude_of(const FitResult& fit, std::size_t which);

/// Dips seeded at the given centers; amplitude from the signal there,
/// baseline from the largest signal value.
LorentzianModel seed_at(const Spectrum& spectrum, std::span<const double> centers,
                        double fwhm_guess);

/// Up to n_dips deepest local minima below the baseline, widths from
/// half-depth crossings.
LorentzianModel seed_from_minima(const Spectrum& spectrum, std::size_t n_dips);

/// Points with lo <= detuning <= hi.
Spectrum slice(const Spectrum& spectrum, double lo, double hi);

}  // namespace nvdress::analysis
