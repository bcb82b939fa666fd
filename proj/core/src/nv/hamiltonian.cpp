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

#include "nvdress/nv/hamiltonian.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "nvdress/errors.hpp"

namespace nvdress::nv {
namespace {

using quantum::Complex;
using quantum::kI;
using quantum::Matrix;
using quantum::Operator;
using quantum::to_angular;

constexpr double kLoopClosureTolerance = 1e-9;  // MHz

int level_slot(Level l) { return static_cast<int>(l); }

int gauge_rank(const DriveField& d) {
  if (d.kind == DriveKind::Microwave) return d.upper == Level::Plus ? 0 : 1;
  return d.lower == Level::Minus ? 2 : 3;
}

std::vector<DriveField> checked_drives(const SystemConfig& cfg, std::span<const DriveField> drives) {
  if (drives.size() > 4) throw InvalidArgument("at most four drives are supported");
  std::vector<DriveField> sorted(drives.begin(), drives.end());
  std::array<bool, 4> seen{};
  for (const auto& d : sorted) {
    d.validate();
    if (!cfg.has(d.lower) || !cfg.has(d.upper)) {
      throw InvalidArgument("drive addresses a level missing from the model");
    }
    auto& flag = seen[static_cast<std::size_t>(gauge_rank(d))];
    if (flag) throw InvalidArgument("duplicate drives on one transition");
    flag = true;
  }
  std::sort(sorted.begin(), sorted.end(),
            [](const DriveField& a, const DriveField& b) { return gauge_rank(a) < gauge_rank(b); });
  return sorted;
}

Matrix assemble_block(const SystemConfig& cfg, const std::vector<DriveField>& drives,
                      double delta_n, double delta_opt, Eigen::Index block,
                      std::optional<quantum::OscillatingTerm>& osc, double& mismatch) {
  const Eigen::Index n = cfg.block_dim();
  Matrix h = Matrix::Zero(n, n);
  std::array<std::optional<double>, 4> offset;  // E_k - f_k, MHz

  osc.reset();
  mismatch = 0.0;
  for (const auto& d : drives) {
    auto& lo = offset[static_cast<std::size_t>(level_slot(d.lower))];
    auto& up = offset[static_cast<std::size_t>(level_slot(d.upper))];
    const Eigen::Index a = *cfg.index_in_block(d.lower);
    const Eigen::Index b = *cfg.index_in_block(d.upper);
    const Complex coupling = 0.5 * to_angular(d.rabi_mhz) * std::exp(-kI * d.phase_rad);
    if (!lo && !up) lo = 0.0;
    if (lo && !up) {
      up = *lo - d.detuning_mhz;
    } else if (!lo && up) {
      lo = *up + d.detuning_mhz;
    } else {
      const double residual = d.detuning_mhz + *up - *lo;
      if (std::abs(residual) > kLoopClosureTolerance) {
        mismatch = -residual;
        Matrix m = Matrix::Zero(n, n);
        m(b, a) = coupling;
        osc = quantum::OscillatingTerm{Operator(std::move(m)), to_angular(-residual)};
        continue;
      }
    }
    h(b, a) += coupling;
    h(a, b) += std::conj(coupling);
  }

  const double hf = cfg.hyperfine_shift_mhz(block);
  for (Level l : cfg.block_levels()) {
    const Eigen::Index k = *cfg.index_in_block(l);
    double shift = offset[static_cast<std::size_t>(level_slot(l))].value_or(0.0);
    if (l == Level::Plus) shift += delta_n + hf;
    if (l == Level::Minus) shift -= delta_n + hf;
    if (l == Level::Excited) shift += delta_opt;
    h(k, k) = to_angular(shift);
  }
  return h;
}

}  // namespace

RotatingHamiltonian build_block_hamiltonian(const SystemConfig& cfg,
                                            std::span<const DriveField> drives,
                                            double delta_n_mhz, double delta_opt_mhz,
                                            Eigen::Index block) {
  cfg.validate();
  if (block < 0 || block >= cfg.block_count()) throw InvalidArgument("hyperfine block out of range");
  const auto sorted = checked_drives(cfg, drives);
  RotatingHamiltonian out;
  Matrix h = assemble_block(cfg, sorted, delta_n_mhz, delta_opt_mhz, block, out.oscillating,
                            out.loop_mismatch_mhz);
  out.static_part = Operator(std::move(h));
  return out;
}

RotatingHamiltonian build_hamiltonian(const SystemConfig& cfg, std::span<const DriveField> drives,
                                      double delta_n_mhz, double delta_opt_mhz) {
  cfg.validate();
  const auto sorted = checked_drives(cfg, drives);
  const Eigen::Index n = cfg.block_dim();
  const Eigen::Index blocks = cfg.block_count();
  Matrix h = Matrix::Zero(n * blocks, n * blocks);
  Matrix osc_full = Matrix::Zero(n * blocks, n * blocks);
  RotatingHamiltonian out;
  for (Eigen::Index b = 0; b < blocks; ++b) {
    std::optional<quantum::OscillatingTerm> osc;
    h.block(b * n, b * n, n, n) =
        assemble_block(cfg, sorted, delta_n_mhz, delta_opt_mhz, b, osc, out.loop_mismatch_mhz);
    if (osc) {
      osc_full.block(b * n, b * n, n, n) = osc->op.matrix();
      out.oscillating = quantum::OscillatingTerm{Operator::zero(1), osc->angular_frequency};
    }
  }
  out.static_part = Operator(std::move(h));
  if (out.oscillating) out.oscillating->op = Operator(std::move(osc_full));
  return out;
}

std::vector<quantum::CollapseChannel> block_collapse_operators(const SystemConfig& cfg,
                                                               const RelaxationRates& rates) {
  cfg.validate();
  rates.validate();
  const Eigen::Index n = cfg.block_dim();
  std::vector<quantum::CollapseChannel> out;
  if (cfg.has(Level::Excited)) {
    const Eigen::Index e = *cfg.index_in_block(Level::Excited);
    const double gamma_e = to_angular(rates.excited_decay_mhz);
    const std::array<std::pair<Level, double>, 3> branches{
        {{Level::Plus, rates.branch_plus},
         {Level::Minus, rates.branch_minus},
         {Level::Zero, rates.branch_zero}}};
    for (const auto& [target, fraction] : branches) {
      const double rate = gamma_e * fraction;
      if (rate == 0.0) continue;
      if (!cfg.has(target)) {
        throw InvalidArgument("excited-state decay into a level missing from the model");
      }
      out.push_back({Operator::transition(n, *cfg.index_in_block(target), e), rate});
    }
    // D[|e><e|] at rate r dephases the dipoles at r/2.
    if (rates.optical_dephasing_mhz > 0.0) {
      out.push_back({Operator::projector(n, e), 2.0 * to_angular(rates.optical_dephasing_mhz)});
    }
  }
  if (rates.spin_dephasing_mhz > 0.0 && cfg.has(Level::Plus) && cfg.has(Level::Minus)) {
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
    diag(*cfg.index_in_block(Level::Plus)) = 1.0;
    diag(*cfg.index_in_block(Level::Minus)) = -1.0;
    // D[diag(.., +1, -1, ..)] at rate r decays |+><-| at 2r.
    out.push_back({Operator::diagonal(diag), 0.5 * to_angular(rates.spin_dephasing_mhz)});
  }
  return out;
}

std::vector<quantum::CollapseChannel> collapse_operators(const SystemConfig& cfg,
                                                         const RelaxationRates& rates) {
  auto channels = block_collapse_operators(cfg, rates);
  if (cfg.block_count() > 1) {
    for (auto& c : channels) c.op = c.op.repeated(cfg.block_count());
  }
  return channels;
}

quantum::Operator zeeman_shift_operator(const SystemConfig& cfg) {
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(cfg.dim());
  for (Eigen::Index b = 0; b < cfg.block_count(); ++b) {
    if (cfg.has(Level::Plus)) diag(cfg.index(Level::Plus, b)) = 1.0;
    if (cfg.has(Level::Minus)) diag(cfg.index(Level::Minus, b)) = -1.0;
  }
  return Operator::diagonal(diag);
}

quantum::Operator excited_projector(const SystemConfig& cfg) {
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(cfg.dim());
  for (Eigen::Index b = 0; b < cfg.block_count(); ++b) {
    diag(cfg.index(Level::Excited, b)) = 1.0;
  }
  return Operator::diagonal(diag);
}

}  // namespace nvdress::nv
