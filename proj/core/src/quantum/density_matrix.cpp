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

#include "nvdress/quantum/density_matrix.hpp"

#include <cmath>
#include <sstream>

#include "nvdress/errors.hpp"

namespace nvdress::quantum {

DensityMatrix::DensityMatrix(Matrix entries, StateTolerance tol) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols() || entries_.rows() == 0) {
    throw InvalidArgument("density matrix must be square and non-empty");
  }
  if (auto problem = check(tol); !problem.empty()) throw InvalidArgument(problem);
}

DensityMatrix DensityMatrix::pure(Eigen::Index dim, Eigen::Index level) {
  return DensityMatrix(Operator::projector(dim, level).matrix());
}

DensityMatrix DensityMatrix::from_state(const Vector& psi) {
  const double norm = psi.norm();
  if (!(norm > 0.0)) throw InvalidArgument("state vector has zero norm");
  const Vector unit = psi / norm;
  return DensityMatrix(unit * unit.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(Eigen::Index dim) {
  return DensityMatrix(Matrix::Identity(dim, dim) / static_cast<double>(dim));
}

DensityMatrix DensityMatrix::unchecked(Matrix entries) {
  return DensityMatrix(std::move(entries), NoCheck{});
}

double DensityMatrix::min_eigenvalue() const {
  const Matrix herm = 0.5 * (entries_ + entries_.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(herm, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

std::string DensityMatrix::check(StateTolerance tol) const {
  std::ostringstream out;
  if (const double herm = hermiticity_error(entries_); herm > tol.hermiticity) {
    out << "density matrix not Hermitian (max deviation " << herm << ")";
  } else if (const double drift = std::abs(trace() - 1.0); drift > tol.trace) {
    out << "density matrix trace deviates from 1 by " << drift;
  } else if (const double lo = min_eigenvalue(); lo < tol.min_eigenvalue) {
    out << "density matrix has negative eigenvalue " << lo;
  }
  return out.str();
}

Complex expectation(const DensityMatrix& rho, const Operator& op) {
  if (rho.dim() != op.dim()) throw InvalidArgument("expectation: dimension mismatch");
  // trace(O rho) without forming the product
  return (op.matrix().transpose().cwiseProduct(rho.matrix())).sum();
}

}  // namespace nvdress::quantum
