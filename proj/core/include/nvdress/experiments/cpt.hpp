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

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "nvdress/analysis/lorentzian.hpp"
#include "nvdress/noise/bath.hpp"
#include "nvdress/nv/system.hpp"
#include "nvdress/spectrum.hpp"

namespace nvdress::experiments {

/// Optical probe pulse. Emission is averaged over [window_start, window_end].
struct PulseSchedule {
  double duration_us = 40.0;
  double step_us = 0.02;
  double window_start_us = 0.0;
  /// Negative means the end of the pulse.
  double window_end_us = -1.0;

  double window_end() const { return window_end_us < 0.0 ? duration_us : window_end_us; }
  void validate() const;
};

enum class SpectrumMode { Steady, Pulsed };

enum class InitialState {
  Zero,          // |0><0|
  Plus,          // |+><+|
  SpinMixture,   // (|+><+| + |-><-|) / 2
};

/// Everything that defines a CPT run except the detuning grid.
struct CptOptions {
  nv::SystemConfig system;
  nv::RelaxationRates rates;
  double omega_m_mhz = 1.0;
  double omega_0_mhz = 0.74;
  /// Relative phase theta of the sigma+ optical field. Unset: the loop phase
  /// is uniformly distributed from repetition to repetition and averaged.
  std::optional<double> loop_phase_rad;
  /// Quadrature points for the loop-phase average.
  int loop_phase_points = 8;
  SpectrumMode mode = SpectrumMode::Steady;
  PulseSchedule schedule;
  /// Unset: |0> when dressed, |+> when omega_m == 0.
  std::optional<InitialState> initial;
  noise::NoiseModel noise;
  int workers = 1;

  void validate() const;
};

/// Ω_0 = calibration * sqrt(P); P in nW, result in MHz.
double power_to_rabi(double power_nw, double calibration_mhz = 0.74);

/// The four CPT drives for two-photon detuning delta (absolute, MHz):
/// resonant microwaves of equal Rabi frequency on |0>-|+> and |0>-|->, and
/// optical fields on |->-|e> (sigma+, phase theta + pi) and |+>-|e>
/// (sigma-, phase 0) whose one-photon detunings are -/+ (delta - omega_B)/2.
/// With theta = pi the optical dark state is the microwave dark state.
/// Microwaves are omitted when omega_m == 0.
std::vector<nv::DriveField> cpt_drives(double omega_m_mhz, double omega_0_mhz, double delta_mhz,
                                       double zeeman_mhz, double theta_rad);

/// Closed-form steady-state coherence rho_{-+} of a weakly probed Lambda
/// system with ground populations n_plus, n_minus, two-photon detuning
/// delta and two-photon resonance at resonance_mhz. All rates in MHz.
std::complex<double> analytic_cpt(double delta_mhz, double resonance_mhz, double rabi_mhz,
                                  double gamma_mhz, double gamma_s_mhz, double n_plus,
                                  double n_minus);

/// FWHM (MHz) of |rho_{-+}|^2 from analytic_cpt: (2 gamma_s + Omega_0^2 / gamma) / 2pi
/// with every rate taken as angular frequency, i.e. 2 gamma_s + Omega_0^2 / gamma in MHz.
double analytic_cpt_fwhm(double rabi_mhz, double gamma_mhz, double gamma_s_mhz);

/// Steady state of the bare optical Lambda (|+>, |->, |e>) probed at
/// two-photon detuning delta. Returns rho_{-+} and the ground populations.
struct LambdaCoherence {
  std::complex<double> coherence;
  double n_plus = 0.0;
  double n_minus = 0.0;
};
LambdaCoherence lambda_coherence(const nv::SystemConfig& system, const nv::RelaxationRates& rates,
                                 double omega_0_mhz, double delta_mhz);

/// Emission Gamma_e <rho_ee> (1/us) versus delta, averaged over the noise
/// ensemble, the loop phase and the hyperfine blocks.
Spectrum cpt_spectrum(const CptOptions& options, std::span<const double> grid);

/// Emission for one bath realization; cpt_spectrum averages this.
Spectrum cpt_spectrum_sample(const CptOptions& options, std::span<const double> grid,
                             const noise::BathSample& bath);

/// Joint fit of the five dressed resonances (one when omega_m == 0), seeded
/// at the predicted positions. Peaks are ordered by predicted position. The
/// baseline polynomial absorbs the slowly varying one-photon background.
analysis::FitResult fit_cpt_resonances(const Spectrum& spectrum, double omega_m_mhz,
                                       double zeeman_mhz, double fwhm_guess_mhz,
                                       int baseline_order = 2);

/// Uniform grid of n points over [lo, hi].
std::vector<double> linspace(double lo, double hi, std::size_t n);

}  // namespace nvdress::experiments
