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

#include "nvdress/nv/dressed.hpp"

#include <cmath>
#include <numbers>

#include "nvdress/errors.hpp"

namespace nvdress::nv {
namespace {

using quantum::Complex;
using quantum::kI;
using quantum::to_angular;

constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

Eigen::Matrix4cd expansion_matrix(double t, double omega_m, double zeeman, double nu) {
  const double a = to_angular(omega_m) * kInvSqrt2;
  const Complex up = std::exp(-kI * (a * t));
  const Complex lo = std::exp(kI * (a * t));
  const Complex plus_phase = std::exp(-kI * (to_angular(zeeman) * t));
  const Complex zero_phase = std::exp(kI * (to_angular(nu) * t));

  // Columns: C_d, C_l, C_u, C_e. Rows: |0>, |+>, |->, |e>.
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  m(0, 1) = -kInvSqrt2 * lo * zero_phase;
  m(0, 2) = kInvSqrt2 * up * zero_phase;
  m(1, 0) = kInvSqrt2 * plus_phase;
  m(1, 1) = 0.5 * lo * plus_phase;
  m(1, 2) = 0.5 * up * plus_phase;
  m(2, 0) = -kInvSqrt2;
  m(2, 1) = 0.5 * lo;
  m(2, 2) = 0.5 * up;
  m(3, 3) = 1.0;
  return m;
}

}  // namespace

DressedEnergies dressed_energies(double omega_m_mhz, double delta_n_mhz) {
  if (!(omega_m_mhz >= 0.0)) throw InvalidArgument("dressed_energies: Omega_m must be >= 0");
  const double gap = std::sqrt(0.5 * omega_m_mhz * omega_m_mhz + delta_n_mhz * delta_n_mhz);
  return {-gap, 0.0, gap};
}

quantum::Operator dressed_transform(double omega_m_mhz) {
  if (!(omega_m_mhz > 0.0)) throw InvalidArgument("dressed_transform: Omega_m must be > 0");
  quantum::Matrix u(3, 3);
  // rows |0>, |+>, |->; columns |l>, |d>, |u>
  u << kInvSqrt2, 0.0, kInvSqrt2,
       -0.5, kInvSqrt2, 0.5,
       -0.5, -kInvSqrt2, 0.5;
  return quantum::Operator(std::move(u));
}

double DressedAmplitudes::norm_squared() const {
  return std::norm(dark) + std::norm(lower) + std::norm(upper) + std::norm(excited);
}

Eigen::Vector4cd dressed_to_bare(const DressedAmplitudes& amps, double t_us, double omega_m_mhz,
                                 double zeeman_mhz, double microwave_mhz) {
  const Eigen::Vector4cd c(amps.dark, amps.lower, amps.upper, amps.excited);
  return expansion_matrix(t_us, omega_m_mhz, zeeman_mhz, microwave_mhz) * c;
}

DressedAmplitudes eq1_amplitudes(const Eigen::Vector4cd& bare, double t_us, double omega_m_mhz,
                                 double zeeman_mhz, double microwave_mhz) {
  if (std::abs(bare.squaredNorm() - 1.0) > 1e-10) {
    throw InvalidArgument("eq1_amplitudes: state must be normalized");
  }
  // The expansion matrix is unitary, so its inverse is the adjoint.
  const Eigen::Vector4cd c =
      expansion_matrix(t_us, omega_m_mhz, zeeman_mhz, microwave_mhz).adjoint() * bare;
  return {c(0), c(1), c(2), c(3)};
}

DarkStateCheck optical_dark_state_check(const DressedAmplitudes& amps, double theta_rad,
                                        double tolerance) {
  const Complex phase = std::exp(kI * theta_rad);
  if (std::abs(1.0 - phase) < 1e-12) {
    throw InvalidArgument("dark-state condition diverges at theta = 0 mod 2pi");
  }
  if (std::abs(amps.dark) == 0.0) throw InvalidArgument("dark-state condition needs C_d != 0");
  const Complex required = std::numbers::sqrt2 * (1.0 + phase) / (1.0 - phase);
  const double residual = std::abs((amps.lower + amps.upper) / amps.dark - required);
  return {residual <= tolerance, residual};
}

std::array<double, 5> cpt_resonance_positions(double omega_m_mhz, double zeeman_mhz) {
  if (!(omega_m_mhz >= 0.0)) throw InvalidArgument("cpt_resonance_positions: Omega_m must be >= 0");
  const double first = omega_m_mhz * kInvSqrt2;
  const double second = omega_m_mhz * std::numbers::sqrt2;
  return {zeeman_mhz - second, zeeman_mhz - first, zeeman_mhz, zeeman_mhz + first,
          zeeman_mhz + second};
}

}  // namespace nvdress::nv
