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

#include "nvdress/quantum/operator.hpp"

#include <algorithm>
#include <string>

#include "nvdress/errors.hpp"

namespace nvdress::quantum {

Operator::Operator(Matrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols()) {
    throw InvalidArgument("operator must be square, got " + std::to_string(entries_.rows()) +
                          "x" + std::to_string(entries_.cols()));
  }
  if (entries_.rows() == 0) throw InvalidArgument("operator dimension must be positive");
}

Operator Operator::zero(Eigen::Index dim) { return Operator(Matrix::Zero(dim, dim)); }

Operator Operator::identity(Eigen::Index dim) { return Operator(Matrix::Identity(dim, dim)); }

Operator Operator::transition(Eigen::Index dim, Eigen::Index row, Eigen::Index col) {
  if (row < 0 || col < 0 || row >= dim || col >= dim) {
    throw InvalidArgument("transition index out of range");
  }
  Matrix m = Matrix::Zero(dim, dim);
  m(row, col) = 1.0;
  return Operator(std::move(m));
}

Operator Operator::diagonal(const Eigen::VectorXd& values) {
  return Operator(values.cast<Complex>().asDiagonal().toDenseMatrix());
}

bool Operator::is_hermitian(double tol) const {
  const double scale = std::max(1.0, entries_.cwiseAbs().maxCoeff());
  return hermiticity_error(entries_) <= tol * scale;
}

Operator Operator::repeated(Eigen::Index copies) const {
  const Eigen::Index n = dim();
  Matrix m = Matrix::Zero(n * copies, n * copies);
  for (Eigen::Index b = 0; b < copies; ++b) m.block(b * n, b * n, n, n) = entries_;
  return Operator(std::move(m));
}

Operator& Operator::operator+=(const Operator& other) {
  if (other.dim() != dim()) throw InvalidArgument("operator dimension mismatch in sum");
  entries_ += other.entries_;
  return *this;
}

Operator& Operator::operator*=(Complex factor) {
  entries_ *= factor;
  return *this;
}

Operator operator*(const Operator& a, const Operator& b) {
  if (a.dim() != b.dim()) throw InvalidArgument("operator dimension mismatch in product");
  return Operator(a.entries_ * b.entries_);
}

}  // namespace nvdress::quantum
