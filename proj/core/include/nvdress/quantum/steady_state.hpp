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

#include "nvdress/quantum/density_matrix.hpp"
#include "nvdress/quantum/liouvillian.hpp"

namespace nvdress::quantum {

/// Stationary state of a time-independent generator, solved as the
/// least-squares problem {L vec(rho) = 0, trace(rho) = 1}.
/// Throws NonUniqueSteadyState when L has more than one null direction.
DensityMatrix steady_state(const Liouvillian& generator);

struct PeriodicSteadyStateOptions {
  int initial_harmonics = 4;
  int max_harmonics = 1024;
  /// Max-element change of the cycle-averaged state between doublings.
  double tolerance = 1e-11;
};

struct PeriodicSteadyState {
  /// Time average of rho(t) over one drive period.
  DensityMatrix average;
  int harmonics = 0;
};

/// Asymptotic periodic state of L(t) = L0 + e^{i w t} Lp + e^{-i w t} Lm.
///
/// rho(t) = sum_n rho_n e^{i n w t}; the harmonic ladder is truncated at
/// |n| <= N and eliminated with matrix continued fractions, leaving a
/// stationary problem for rho_0. N is doubled until rho_0 stops changing.
/// With w == 0 this reduces to steady_state(L0 + Lp + Lm).
PeriodicSteadyState periodic_steady_state(const Liouvillian& static_part,
                                          const Matrix& raising, const Matrix& lowering,
                                          double angular_frequency,
                                          const PeriodicSteadyStateOptions& options = {});

}  // namespace nvdress::quantum
