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

#include "nvdress/quantum/operator.hpp"

namespace nvdress::quantum {

/// Tolerances a physical state must satisfy.
struct StateTolerance {
  double hermiticity = 1e-10;
  double trace = 1e-9;
  double min_eigenvalue = -1e-8;
};

/// Hermitian, unit-trace, positive semidefinite matrix.
class DensityMatrix {
 public:
  /// Validates against `tol` and throws InvalidArgument on violation.
  explicit DensityMatrix(Matrix entries, StateTolerance tol = {});

  static DensityMatrix pure(Eigen::Index dim, Eigen::Index level);
  static DensityMatrix from_state(const Vector& psi);
  static DensityMatrix maximally_mixed(Eigen::Index dim);

  /// Wraps numerically produced entries without validation. Callers own the
  /// invariant; used inside integrators where validation would dominate cost.
  static DensityMatrix unchecked(Matrix entries);

  Eigen::Index dim() const { return entries_.rows(); }
  const Matrix& matrix() const { return entries_; }

  Complex trace() const { return entries_.trace(); }
  double population(Eigen::Index level) const { return entries_(level, level).real(); }
  double min_eigenvalue() const;

  /// Returns a description of the first violated invariant, or empty.
  std::string check(StateTolerance tol = {}) const;

 private:
  struct NoCheck {};
  DensityMatrix(Matrix entries, NoCheck) : entries_(std::move(entries)) {}

  Matrix entries_;
};

/// trace(O rho)
Complex expectation(const DensityMatrix& rho, const Operator& op);

}  // namespace nvdress::quantum
