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

#include <map>
#include <span>
#include <string>
#include <vector>

#include "nvdress/analysis/lorentzian.hpp"
#include "nvdress/experiments/cpt.hpp"

namespace nvdress::experiments {

enum class Resonance { Central, FirstSideband };

/// How the detuning grid around a resonance is laid out, in units of the
/// expected linewidth.
struct GridPolicy {
  double points_per_fwhm = 8.0;
  /// Half-width of a single-resonance window.
  double half_window_fwhm = 4.0;
  std::size_t max_points = 2001;
};

struct SweepPoint {
  double value = 0.0;
  double fwhm_mhz = 0.0;
  double fwhm_error_mhz = 0.0;
  double center_mhz = 0.0;
  /// Sideband offset from the central resonance (splitting sweeps only).
  double splitting_mhz = 0.0;
  double splitting_error_mhz = 0.0;
  bool ok = false;
  /// "ok", "overlapping", "fit_failed: ...", "unresolved".
  std::string status;
  int iterations = 0;
  double residual_rms = 0.0;
};

struct SweepResult {
  std::string variable;  // "power_nw" or "omega_m_mhz"
  std::vector<SweepPoint> points;
  std::map<std::string, std::string> metadata;
};

/// Linewidth guess (MHz) for the resonances of `options`: Lambda power
/// broadening plus Markovian dephasing, the pulse transit width, and, for
/// the bare case, the Gaussian spin-noise width.
double expected_fwhm(const CptOptions& options);

/// Simulates and fits one resonance. Narrow central resonances are fitted
/// alone in a local window; otherwise all dips are fitted jointly.
SweepPoint measure_resonance(const CptOptions& options, Resonance which,
                             const GridPolicy& grid = {}, Spectrum* spectrum_out = nullptr);

/// Central linewidth versus optical power (nW). Bare mode sets omega_m = 0.
SweepResult linewidth_vs_power(const CptOptions& base, std::span<const double> powers_nw,
                               bool dressed, double calibration_mhz = 0.74,
                               const GridPolicy& grid = {});

/// Linewidth of `which` versus omega_m at fixed power.
SweepResult linewidth_vs_omega_m(const CptOptions& base, std::span<const double> omega_m_mhz,
                                 double power_nw, Resonance which, double calibration_mhz = 0.74,
                                 const GridPolicy& grid = {});

/// Offset of the first sidebands from the central resonance versus omega_m,
/// half the fitted distance between the two first sidebands.
SweepResult splitting_vs_omega_m(const CptOptions& base, std::span<const double> omega_m_mhz,
                                 double power_nw, double calibration_mhz = 0.74,
                                 const GridPolicy& grid = {});

/// Spin-noise amplitude sigma_N (MHz) for which the bare steady-state CPT
/// resonance of `base` (omega_m forced to 0) at `power_nw` has FWHM
/// `target_fwhm_mhz`. The noise seed and sample count of `base` are kept.
double calibrate_bare_sigma(const CptOptions& base, double target_fwhm_mhz, double power_nw = 0.5,
                            double calibration_mhz = 0.74, const GridPolicy& grid = {});

}  // namespace nvdress::experiments
