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

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "nvdress/quantum/density_matrix.hpp"
#include "nvdress/quantum/liouvillian.hpp"

namespace nvdress::quantum {

/// Contributes op * e^{i w t} + h.c. to H(t).
struct OscillatingTerm {
  Operator op;
  double angular_frequency = 0.0;  // rad/us
};

/// Contributes coefficient(t) * op to H(t); op must be Hermitian.
struct ModulatedTerm {
  Operator op;
  std::function<double(double)> coefficient;
};

struct PropagationOptions {
  /// Operators whose expectation values are recorded at every step.
  std::vector<Operator> observables;
  /// Keep every k-th state; 0 keeps only the initial and final states.
  int state_stride = 1;
  double trace_tolerance = 1e-8;
  double min_step = 1e-9;
  std::vector<ModulatedTerm> modulations;
};

struct Trajectory {
  /// Every integration time point, strictly increasing.
  std::vector<double> times;
  /// observables[j][i] = trace(O_j rho(times[i])).
  std::vector<std::vector<Complex>> observables;
  std::vector<double> state_times;
  /// Stored states are symmetrized; this is the largest |rho - rho^dagger|
  /// element seen before that, over every stored state.
  double hermiticity_error = 0.0;
  std::vector<DensityMatrix> states;
  /// Step actually used after any halving.
  double step = 0.0;

  const DensityMatrix& final_state() const { return states.back(); }
};

/// Fixed-step fourth-order Runge-Kutta integration of the master equation
/// with H(t) = H_static + H_osc e^{i w t} + h.c. + sum_j c_j(t) M_j.
/// The step is halved until trace drift stays below options.trace_tolerance
/// and the state stays bounded (|rho_ij| <= 1, populations >= 0);
/// throws ConvergenceError once it would fall below options.min_step.
Trajectory propagate(const Operator& h_static, const std::optional<OscillatingTerm>& oscillating,
                     std::span<const CollapseChannel> channels, const DensityMatrix& initial,
                     double duration, double step, const PropagationOptions& options = {});

}  // namespace nvdress::quantum
