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

#include "nvdress/quantum/types.hpp"

namespace nvdress::quantum {

/// Square complex matrix acting on the level basis. Hamiltonians are stored in
/// angular-frequency units (rad/us).
class Operator {
 public:
  Operator() = default;
  explicit Operator(Matrix entries);

  static Operator zero(Eigen::Index dim);
  static Operator identity(Eigen::Index dim);
  /// |row><col|
  static Operator transition(Eigen::Index dim, Eigen::Index row, Eigen::Index col);
  static Operator projector(Eigen::Index dim, Eigen::Index level) {
    return transition(dim, level, level);
  }
  static Operator diagonal(const Eigen::VectorXd& values);

  Eigen::Index dim() const { return entries_.rows(); }
  const Matrix& matrix() const { return entries_; }

  Operator adjoint() const { return Operator(entries_.adjoint()); }
  bool is_hermitian(double tol = 1e-12) const;

  /// Block-diagonal repetition: identity(copies) (x) this.
  Operator repeated(Eigen::Index copies) const;

  Operator& operator+=(const Operator& other);
  Operator& operator*=(Complex factor);

  friend Operator operator+(Operator a, const Operator& b) { return a += b; }
  friend Operator operator*(Complex factor, Operator a) { return a *= factor; }
  friend Operator operator*(const Operator& a, const Operator& b);

 private:
  Matrix entries_;
};

}  // namespace nvdress::quantum
