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

#include <span>
#include <vector>

#include "nvdress/quantum/density_matrix.hpp"
#include "nvdress/quantum/operator.hpp"

namespace nvdress::quantum {

/// Lindblad channel: rate * (C rho C^H - {C^H C, rho}/2), rate in rad/us.
struct CollapseChannel {
  Operator op;
  double rate = 0.0;
};

/// Column-major vectorization.
Vector vectorize(const Matrix& m);
Matrix unvectorize(const Vector& v, Eigen::Index dim);

/// Generator of Lindblad dynamics acting on vec(rho), dim^2 x dim^2.
class Liouvillian {
 public:
  Liouvillian(Eigen::Index dim, Matrix superoperator);

  Eigen::Index dim() const { return dim_; }
  const Matrix& matrix() const { return matrix_; }

  Matrix apply(const Matrix& rho) const;

  /// Largest |(vec(I)^H L)_k|; zero for a trace-preserving generator.
  double trace_defect() const;

  friend Liouvillian operator+(const Liouvillian& a, const Liouvillian& b);

 private:
  Eigen::Index dim_;
  Matrix matrix_;
};

/// L vec(rho) = vec(-i[H, rho] + sum_k rate_k D[C_k] rho).
/// Throws InvalidArgument on dimension mismatch, negative rate or non-Hermitian H.
Liouvillian build_liouvillian(const Operator& hamiltonian,
                              std::span<const CollapseChannel> channels);

/// Superoperator of rho -> -i (A rho - rho A) for an arbitrary (not
/// necessarily Hermitian) A. Used for the oscillating parts of H(t).
Matrix commutator_superoperator(const Operator& a);

}  // namespace nvdress::quantum
