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

#include <array>
#include <optional>
#include <span>
#include <string_view>

#include <Eigen/Core>

namespace nvdress::nv {

/// Ground-state triplet |0>, |+>, |-> and the A2 excited state |e>.
enum class Level { Zero, Plus, Minus, Excited };

std::string_view to_string(Level level);

/// Which levels a model carries, always in the order |0>, |+>, |->, |e>.
enum class LevelSet {
  SpinOnly,  // |0>, |+>, |->
  Full,      // |0>, |+>, |->, |e>
  Lambda,    // |+>, |->, |e>   (bare-spin optical Lambda, |0> decoupled)
};

/// Static description of the NV center. Frequencies in MHz.
struct SystemConfig {
  /// Zeeman splitting between |+> and |->.
  double zeeman_mhz = 100.0;
  LevelSet levels = LevelSet::Full;
  /// Adds the 14N projections m_n = -1, 0, +1 as spectator blocks.
  bool hyperfine = false;
  /// Offset of the m_n = +-1 two-photon resonance from the m_n = 0 one.
  double hyperfine_mhz = 4.4;

  static constexpr std::array<int, 3> kNuclearProjections{-1, 0, +1};

  void validate() const;

  std::span<const Level> block_levels() const;
  Eigen::Index block_dim() const { return static_cast<Eigen::Index>(block_levels().size()); }
  Eigen::Index block_count() const { return hyperfine ? 3 : 1; }
  Eigen::Index dim() const { return block_dim() * block_count(); }

  bool has(Level level) const { return index_in_block(level).has_value(); }
  std::optional<Eigen::Index> index_in_block(Level level) const;
  /// Index of `level` within hyperfine block `block` (0-based, ordered m_n = -1, 0, +1).
  Eigen::Index index(Level level, Eigen::Index block = 0) const;

  /// Energy shift (MHz) of |+> in block `block`; |-> receives the negative.
  double hyperfine_shift_mhz(Eigen::Index block) const;
};

/// Population decay of |e>, its branching, and pure dephasing. All MHz.
struct RelaxationRates {
  double excited_decay_mhz = 13.0;
  double branch_plus = 0.5;
  double branch_minus = 0.5;
  double branch_zero = 0.0;
  /// Extra dephasing of the optical dipoles on top of Gamma_e / 2.
  double optical_dephasing_mhz = 0.0;
  /// Markovian decay rate of the |+><-| spin coherence.
  double spin_dephasing_mhz = 0.0;

  /// gamma = Gamma_e / 2 + gamma_phi
  double dipole_decoherence_mhz() const { return 0.5 * excited_decay_mhz + optical_dephasing_mhz; }

  void validate() const;
};

enum class DriveKind { Microwave, Optical };

/// One continuous drive in the rotating-wave approximation. The coupling is
/// (rabi/2) e^{-i phase} |upper><lower| + h.c.; detuning is the drive
/// frequency minus the bare transition frequency.
struct DriveField {
  DriveKind kind = DriveKind::Microwave;
  Level lower = Level::Zero;
  Level upper = Level::Plus;
  double rabi_mhz = 0.0;
  double detuning_mhz = 0.0;
  double phase_rad = 0.0;

  void validate() const;
};

}  // namespace nvdress::nv
