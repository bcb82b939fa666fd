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

#include <span>
#include <vector>

#include "nvdress/nv/system.hpp"

namespace nvdress::experiments {

struct RabiTrace {
  std::vector<double> times;       // us
  std::vector<double> population;  // of drive.upper
  double rabi_mhz = 0.0;
};

/// Propagates a single drive from its lower level and extracts the Rabi
/// frequency from the dominant oscillation of the upper-level population.
/// Throws NumericalError when no full oscillation is resolved.
RabiTrace rabi_trace(const nv::SystemConfig& system, const nv::RelaxationRates& rates,
                     const nv::DriveField& drive, double duration_us, double step_us);

/// Frequency (MHz) of the strongest Fourier component of uniformly sampled
/// data, refined by quadratic interpolation of the zero-padded spectrum.
double dominant_frequency(std::span<const double> values, double step_us);

}  // namespace nvdress::experiments
