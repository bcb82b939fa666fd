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

#include "nvdress/quantum/liouvillian.hpp"

#include <string>

#include <unsupported/Eigen/KroneckerProduct>

#include "nvdress/errors.hpp"

namespace nvdress::quantum {

Vector vectorize(const Matrix& m) { return Eigen::Map<const Vector>(m.data(), m.size()); }

Matrix unvectorize(const Vector& v, Eigen::Index dim) {
  if (v.size() != dim * dim) throw InvalidArgument("unvectorize: size mismatch");
  return Eigen::Map<const Matrix>(v.data(), dim, dim);
}

Liouvillian::Liouvillian(Eigen::Index dim, Matrix superoperator)
    : dim_(dim), matrix_(std::move(superoperator)) {
  if (matrix_.rows() != dim * dim || matrix_.cols() != dim * dim) {
    throw InvalidArgument("Liouvillian must be dim^2 x dim^2");
  }
}

Matrix Liouvillian::apply(const Matrix& rho) const {
  if (rho.rows() != dim_ || rho.cols() != dim_) {
    throw InvalidArgument("Liouvillian::apply: dimension mismatch");
  }
  return unvectorize(matrix_ * vectorize(rho), dim_);
}

double Liouvillian::trace_defect() const {
  // vec(I)^H L picks the rows of L that hold diagonal elements.
  Eigen::RowVectorXcd row = Eigen::RowVectorXcd::Zero(matrix_.cols());
  for (Eigen::Index k = 0; k < dim_; ++k) row += matrix_.row(k * dim_ + k);
  return row.cwiseAbs().maxCoeff();
}

Liouvillian operator+(const Liouvillian& a, const Liouvillian& b) {
  if (a.dim_ != b.dim_) throw InvalidArgument("Liouvillian sum: dimension mismatch");
  return Liouvillian(a.dim_, a.matrix_ + b.matrix_);
}

Matrix commutator_superoperator(const Operator& a) {
  const Eigen::Index n = a.dim();
  const Matrix id = Matrix::Identity(n, n);
  Matrix left = Eigen::kroneckerProduct(id, a.matrix());
  Matrix right = Eigen::kroneckerProduct(a.matrix().transpose(), id);
  return -kI * (left - right);
}

Liouvillian build_liouvillian(const Operator& hamiltonian,
                              std::span<const CollapseChannel> channels) {
  const Eigen::Index n = hamiltonian.dim();
  if (!hamiltonian.is_hermitian()) {
    throw InvalidArgument("build_liouvillian: Hamiltonian is not Hermitian (deviation " +
                          std::to_string(hermiticity_error(hamiltonian.matrix())) + ")");
  }
  Matrix super = commutator_superoperator(hamiltonian);
  const Matrix id = Matrix::Identity(n, n);
  for (const auto& [op, rate] : channels) {
    if (op.dim() != n) throw InvalidArgument("build_liouvillian: collapse operator dimension mismatch");
    if (!(rate >= 0.0)) throw InvalidArgument("build_liouvillian: negative collapse rate");
    if (rate == 0.0) continue;
    const Matrix& c = op.matrix();
    const Matrix cdc = c.adjoint() * c;
    super += rate * (Matrix(Eigen::kroneckerProduct(c.conjugate(), c)) -
                     0.5 * Matrix(Eigen::kroneckerProduct(id, cdc)) -
                     0.5 * Matrix(Eigen::kroneckerProduct(cdc.transpose(), id)));
  }
  return Liouvillian(n, std::move(super));
}

}  // namespace nvdress::quantum
