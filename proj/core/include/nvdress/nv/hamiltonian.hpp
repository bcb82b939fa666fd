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

#include <optional>
#include <span>
#include <vector>

#include "nvdress/nv/system.hpp"
#include "nvdress/quantum/liouvillian.hpp"
#include "nvdress/quantum/propagate.hpp"

namespace nvdress::nv {

/// Rotating-frame Hamiltonian in rad/us. When the four drives form a loop
/// whose frequencies do not close, one coupling keeps a residual
/// e^{i w t} dependence and is returned in `oscillating`.
struct RotatingHamiltonian {
  quantum::Operator static_part;
  std::optional<quantum::OscillatingTerm> oscillating;
  /// Net frequency mismatch around the drive loop (MHz), zero when closed.
  double loop_mismatch_mhz = 0.0;
};

/// Frame assignment: drives are visited in the order mw(0,+), mw(0,-),
/// optical(-,e), optical(+,e); each drive that reaches an unframed level
/// fixes that level's frame, and a drive between two framed levels carries
/// the residual. delta_n enters as +delta_n on |+> and -delta_n on |->;
/// delta_opt shifts |e>.
RotatingHamiltonian build_hamiltonian(const SystemConfig& cfg, std::span<const DriveField> drives,
                                      double delta_n_mhz, double delta_opt_mhz);

/// Hamiltonian of a single hyperfine block (block_dim x block_dim).
RotatingHamiltonian build_block_hamiltonian(const SystemConfig& cfg,
                                            std::span<const DriveField> drives,
                                            double delta_n_mhz, double delta_opt_mhz,
                                            Eigen::Index block);

/// Decay |e> -> |+>, |->, |0> with the branching fractions, extra optical
/// dephasing on |e>, and magnetic dephasing diag(0, +1, -1, 0) scaled so
/// the |+><-| coherence decays at spin_dephasing. Rates in rad/us;
/// zero-rate channels are omitted.
std::vector<quantum::CollapseChannel> collapse_operators(const SystemConfig& cfg,
                                                         const RelaxationRates& rates);

/// Same channels restricted to a single hyperfine block.
std::vector<quantum::CollapseChannel> block_collapse_operators(const SystemConfig& cfg,
                                                               const RelaxationRates& rates);

/// The operator diag(0, +1, -1, 0) through which delta_n couples (unscaled, all blocks).
quantum::Operator zeeman_shift_operator(const SystemConfig& cfg);

/// Projector onto |e> summed over hyperfine blocks.
quantum::Operator excited_projector(const SystemConfig& cfg);

}  // namespace nvdress::nv
