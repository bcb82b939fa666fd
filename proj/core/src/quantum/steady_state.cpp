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

#include "nvdress/quantum/steady_state.hpp"

#include <cmath>
#include <sstream>

#include "nvdress/errors.hpp"

namespace nvdress::quantum {
namespace {

constexpr double kRankThreshold = 1e-11;
constexpr double kResidualBound = 1e-8;

}  // namespace

DensityMatrix steady_state(const Liouvillian& generator) {
  const Eigen::Index n = generator.dim();
  const Eigen::Index size = n * n;
  const Matrix& l = generator.matrix();

  Eigen::ColPivHouseholderQR<Matrix> rank_probe(l);
  rank_probe.setThreshold(kRankThreshold);
  if (rank_probe.rank() < size - 1) {
    std::ostringstream msg;
    msg << "steady state is not unique: generator has " << size - rank_probe.rank()
        << " null directions";
    throw NonUniqueSteadyState(msg.str());
  }

  Matrix augmented(size + 1, size);
  augmented.topRows(size) = l;
  augmented.bottomRows(1).setZero();
  for (Eigen::Index k = 0; k < n; ++k) augmented(size, k * n + k) = 1.0;
  Vector rhs = Vector::Zero(size + 1);
  rhs(size) = 1.0;

  const Vector x = augmented.colPivHouseholderQr().solve(rhs);
  const double residual = (l * x).norm();
  const double bound = kResidualBound * l.norm() * std::max(1.0, x.norm());
  if (!(residual <= bound)) {
    std::ostringstream msg;
    msg << "steady-state residual " << residual << " exceeds bound " << bound;
    throw NumericalError(msg.str());
  }

  Matrix rho = unvectorize(x, n);
  rho = 0.5 * (rho + rho.adjoint());
  rho /= rho.trace();
  DensityMatrix out = DensityMatrix::unchecked(std::move(rho));
  if (auto problem = out.check(); !problem.empty()) {
    throw NumericalError("steady state is not a valid density matrix: " + problem);
  }
  return out;
}

namespace {

Matrix cycle_average(const Liouvillian& l0, const Matrix& raising, const Matrix& lowering,
                     double w, int harmonics) {
  const Eigen::Index size = l0.matrix().rows();
  const Matrix id = Matrix::Identity(size, size);

  // rho_{n+1} = S_{n+1} rho_n for n >= 0, rho_{-n-1} = T_{-n-1} rho_{-n}.
  Matrix upper = Matrix::Zero(size, size);
  Matrix lower = Matrix::Zero(size, size);
  for (int k = harmonics; k >= 1; --k) {
    const Complex shift = kI * (static_cast<double>(k) * w);
    Matrix a_up = shift * id - l0.matrix() - lowering * upper;
    upper = a_up.partialPivLu().solve(raising);
    Matrix a_down = -shift * id - l0.matrix() - raising * lower;
    lower = a_down.partialPivLu().solve(lowering);
  }
  Matrix effective = l0.matrix() + raising * lower + lowering * upper;
  return steady_state(Liouvillian(l0.dim(), std::move(effective))).matrix();
}

}  // namespace

PeriodicSteadyState periodic_steady_state(const Liouvillian& static_part, const Matrix& raising,
                                          const Matrix& lowering, double angular_frequency,
                                          const PeriodicSteadyStateOptions& options) {
  const Eigen::Index size = static_part.matrix().rows();
  if (raising.rows() != size || raising.cols() != size || lowering.rows() != size ||
      lowering.cols() != size) {
    throw InvalidArgument("periodic_steady_state: superoperator dimension mismatch");
  }
  if (angular_frequency == 0.0) {
    Liouvillian total(static_part.dim(), static_part.matrix() + raising + lowering);
    return {steady_state(total), 0};
  }

  int harmonics = std::max(1, options.initial_harmonics);
  Matrix previous = cycle_average(static_part, raising, lowering, angular_frequency, harmonics);
  while (true) {
    const int next = 2 * harmonics;
    if (next > options.max_harmonics) {
      throw ConvergenceError("periodic steady state did not converge within " +
                             std::to_string(options.max_harmonics) + " harmonics");
    }
    Matrix current = cycle_average(static_part, raising, lowering, angular_frequency, next);
    const double change = (current - previous).cwiseAbs().maxCoeff();
    harmonics = next;
    previous = std::move(current);
    if (change <= options.tolerance) break;
  }
  return {DensityMatrix::unchecked(std::move(previous)), harmonics};
}

}  // namespace nvdress::quantum
