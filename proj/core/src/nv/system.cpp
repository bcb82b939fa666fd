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

#include "nvdress/nv/system.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nvdress/errors.hpp"

namespace nvdress::nv {
namespace {

constexpr std::array kSpinOnly{Level::Zero, Level::Plus, Level::Minus};
constexpr std::array kFull{Level::Zero, Level::Plus, Level::Minus, Level::Excited};
constexpr std::array kLambda{Level::Plus, Level::Minus, Level::Excited};

bool finite_nonnegative(double x) { return std::isfinite(x) && x >= 0.0; }

}  // namespace

std::string_view to_string(Level level) {
  switch (level) {
    case Level::Zero: return "0";
    case Level::Plus: return "+";
    case Level::Minus: return "-";
    case Level::Excited: return "e";
  }
  return "?";
}

void SystemConfig::validate() const {
  if (!(std::isfinite(zeeman_mhz) && zeeman_mhz > 0.0)) {
    throw InvalidArgument("Zeeman splitting must be positive");
  }
  if (!finite_nonnegative(hyperfine_mhz)) {
    throw InvalidArgument("hyperfine splitting must be non-negative");
  }
}

std::span<const Level> SystemConfig::block_levels() const {
  switch (levels) {
    case LevelSet::SpinOnly: return kSpinOnly;
    case LevelSet::Full: return kFull;
    case LevelSet::Lambda: return kLambda;
  }
  return kFull;
}

std::optional<Eigen::Index> SystemConfig::index_in_block(Level level) const {
  const auto lv = block_levels();
  const auto it = std::find(lv.begin(), lv.end(), level);
  if (it == lv.end()) return std::nullopt;
  return static_cast<Eigen::Index>(it - lv.begin());
}

Eigen::Index SystemConfig::index(Level level, Eigen::Index block) const {
  const auto local = index_in_block(level);
  if (!local) {
    throw InvalidArgument("level |" + std::string(to_string(level)) + "> is not part of this model");
  }
  if (block < 0 || block >= block_count()) throw InvalidArgument("hyperfine block out of range");
  return block * block_dim() + *local;
}

double SystemConfig::hyperfine_shift_mhz(Eigen::Index block) const {
  if (!hyperfine) return 0.0;
  return 0.5 * hyperfine_mhz * kNuclearProjections.at(static_cast<std::size_t>(block));
}

void RelaxationRates::validate() const {
  for (double r : {excited_decay_mhz, branch_plus, branch_minus, branch_zero,
                   optical_dephasing_mhz, spin_dephasing_mhz}) {
    if (!finite_nonnegative(r)) throw InvalidArgument("relaxation rates must be non-negative");
  }
  if (std::abs(branch_plus + branch_minus + branch_zero - 1.0) > 1e-12) {
    throw InvalidArgument("branching fractions must sum to 1");
  }
}

void DriveField::validate() const {
  if (!finite_nonnegative(rabi_mhz)) throw InvalidArgument("Rabi frequency must be non-negative");
  if (!std::isfinite(detuning_mhz) || !std::isfinite(phase_rad)) {
    throw InvalidArgument("drive detuning and phase must be finite");
  }
  const bool microwave_ok =
      lower == Level::Zero && (upper == Level::Plus || upper == Level::Minus);
  const bool optical_ok =
      upper == Level::Excited && (lower == Level::Plus || lower == Level::Minus);
  if (kind == DriveKind::Microwave && !microwave_ok) {
    throw InvalidArgument("microwave drives address |0> <-> |+-> only");
  }
  if (kind == DriveKind::Optical && !optical_ok) {
    throw InvalidArgument("optical drives address |+-> <-> |e> only");
  }
}

}  // namespace nvdress::nv
