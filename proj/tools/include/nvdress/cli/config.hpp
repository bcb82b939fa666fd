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
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nvdress/errors.hpp"
#include "nvdress/experiments/cpt.hpp"
#include "nvdress/experiments/sweeps.hpp"

namespace nvdress::cli {

/// Bad or unknown configuration; the message carries source:line:column.
class ConfigError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// I/O failure while reading inputs or writing outputs.
class IoError : public Error {
 public:
  using Error::Error;
};

struct ScanConfig {
  double start_mhz = -2.0;
  double stop_mhz = 2.0;
  int points = 201;
  /// Start/stop measured from the Zeeman splitting.
  bool relative = true;
};

struct NoiseConfig {
  /// none | static_gaussian | ornstein_uhlenbeck | static_gaussian_optical
  std::string variant = "none";
  double sigma_n_mhz = 0.0;
  double correlation_time_us = 1.0;
  double sigma_opt_mhz = 0.0;
  std::uint64_t seed = 1;
  int n_samples = 1;
  /// When set, sigma_n is calibrated so the bare CPT width matches.
  std::optional<double> calibrate_bare_fwhm_mhz;
  double calibration_power_nw = 0.5;
};

struct SweepConfig {
  /// power | omega_m | splitting
  std::string kind = "power";
  std::vector<double> values;
  /// central and/or first_sideband (omega_m sweeps).
  std::vector<std::string> resonances{"central"};
  /// dressed and/or bare (power sweeps); bare forces omega_m = 0.
  std::vector<std::string> states{"dressed"};
  /// Fixed power for omega_m and splitting sweeps.
  double power_nw = 2.5;
  double points_per_fwhm = 8.0;
  double half_window_fwhm = 4.0;
};

struct RabiConfig {
  std::string kind = "microwave";
  std::string lower = "zero";
  std::string upper = "plus";
  double rabi_mhz = 1.0;
  double detuning_mhz = 0.0;
  double duration_us = 10.0;
  double step_us = 0.002;
};

struct FitConfig {
  int n_peaks = 1;
  /// Seed centers (MHz); empty seeds from the deepest minima.
  std::vector<double> centers;
  double fwhm_mhz = 0.1;
  int baseline_order = 0;
  /// One common fwhm for all peaks.
  bool shared_width = false;
};

struct OutputConfig {
  std::string dir = "out";
  std::string name = "run";
};

struct RunConfig {
  nv::SystemConfig system;
  nv::RelaxationRates rates;
  double omega_m_mhz = 1.0;
  /// Exactly one of power_nw and omega_0_mhz sets the optical Rabi frequency.
  std::optional<double> power_nw;
  std::optional<double> omega_0_mhz;
  double calibration_mhz = 0.74;
  std::optional<double> loop_phase_rad;
  int loop_phase_points = 8;
  NoiseConfig noise;
  experiments::PulseSchedule schedule;
  experiments::SpectrumMode mode = experiments::SpectrumMode::Steady;
  std::optional<experiments::InitialState> initial;
  ScanConfig scan;
  SweepConfig sweep;
  RabiConfig rabi;
  FitConfig fit;
  OutputConfig output;
  int workers = 1;

  double optical_rabi_mhz() const;
  noise::NoiseModel noise_model() const;
  /// Options for cpt_spectrum, without any sigma calibration applied.
  experiments::CptOptions cpt_options() const;
  std::vector<double> grid() const;
  experiments::GridPolicy grid_policy() const;
  void validate() const;
};

/// Parses YAML (or JSON) text. Unknown keys and malformed values raise
/// ConfigError with `source:line:column`.
RunConfig parse_config(const std::string& text, const std::string& source = "config");
RunConfig load_config(const std::string& path);

/// Every field, so that parse_config(to_json(c).dump()) reproduces c.
nlohmann::json to_json(const RunConfig& config);

}  // namespace nvdress::cli
