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

#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace nvdress::quantum {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

/// Ordinary frequency in MHz to angular frequency in rad/us.
constexpr double to_angular(double mhz) { return kTwoPi * mhz; }

/// Angular frequency in rad/us to ordinary frequency in MHz.
constexpr double to_mhz(double rad_per_us) { return rad_per_us / kTwoPi; }

/// Largest absolute element of a - a^H.
inline double hermiticity_error(const Matrix& a) {
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace nvdress::quantum
