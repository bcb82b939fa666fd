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

#include "nvdress/quantum/operator.hpp"

namespace nvdress::nv {

/// Eigenenergies (MHz) of the ground triplet dressed by two resonant
/// microwaves of equal Rabi frequency, with a bath shift +-delta_n on |+->.
struct DressedEnergies {
  double lower = 0.0;
  double dark = 0.0;
  double upper = 0.0;
};

DressedEnergies dressed_energies(double omega_m_mhz, double delta_n_mhz);

/// Unitary on span{|0>, |+>, |->} whose columns are |l>, |d>, |u>:
///   |l> = (|0> - |b>)/sqrt2, |d> = (|+> - |->)/sqrt2, |u> = (|0> + |b>)/sqrt2,
/// with |b> = (|+> + |->)/sqrt2.
quantum::Operator dressed_transform(double omega_m_mhz);

/// Probability amplitudes of the dressed-state expansion of the electron
/// wave function, in the time-dependent frame of the expansion below.
struct DressedAmplitudes {
  quantum::Complex dark;
  quantum::Complex lower;
  quantum::Complex upper;
  quantum::Complex excited;

  double norm_squared() const;
};

/// Bare-basis state {|0>, |+>, |->, |e>} at time t for the given dressed
/// amplitudes. With a = Omega_m / sqrt2 (angular):
///   c_+ = (C_u/2 e^{-iat} + C_l/2 e^{iat} + C_d/sqrt2) e^{-i w_B t}
///   c_0 = (C_u/sqrt2 e^{-iat} - C_l/sqrt2 e^{iat}) e^{i nu t}
///   c_- =  C_u/2 e^{-iat} + C_l/2 e^{iat} - C_d/sqrt2
///   c_e =  C_e
/// The |l> sign here is opposite to dressed_transform's; this expansion is
/// kept exactly as written.
Eigen::Vector4cd dressed_to_bare(const DressedAmplitudes& amps, double t_us, double omega_m_mhz,
                                 double zeeman_mhz, double microwave_mhz);

/// Inverse of dressed_to_bare. `bare` must be normalized.
DressedAmplitudes eq1_amplitudes(const Eigen::Vector4cd& bare, double t_us, double omega_m_mhz,
                                 double zeeman_mhz, double microwave_mhz);

struct DarkStateCheck {
  bool is_dark = false;
  double residual = 0.0;
};

/// Tests (C_l + C_u)/C_d == sqrt2 (1 + e^{i theta}) / (1 - e^{i theta}), the
/// condition for the optical dark state (|+> + e^{i theta}|->)/sqrt2.
/// Throws InvalidArgument for theta = 0 mod 2pi or C_d = 0.
DarkStateCheck optical_dark_state_check(const DressedAmplitudes& amps, double theta_rad,
                                        double tolerance = 1e-6);

/// Two-photon detunings (MHz) of the five CPT resonances, ascending:
/// w_B - sqrt2 W, w_B - W/sqrt2, w_B, w_B + W/sqrt2, w_B + sqrt2 W.
std::array<double, 5> cpt_resonance_positions(double omega_m_mhz, double zeeman_mhz);

}  // namespace nvdress::nv
