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

#include "nvdress/quantum/propagate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nvdress/errors.hpp"

namespace nvdress::quantum {
namespace {

// Coordinate-list sparse operator; the time-dependent pieces have only a
// handful of nonzeros, where Eigen's sparse kernels carry too much overhead.
struct Entries {
  std::vector<Eigen::Index> rows, cols;
  std::vector<Complex> values;

  static Entries from(const Matrix& m) {
    Entries e;
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      for (Eigen::Index r = 0; r < m.rows(); ++r) {
        if (m(r, c) != Complex(0.0)) {
          e.rows.push_back(r);
          e.cols.push_back(c);
          e.values.push_back(m(r, c));
        }
      }
    }
    return e;
  }

  template <typename Vec>
  void add_product(Complex scale, const Vec& v, Vec& out) const {
    for (std::size_t k = 0; k < values.size(); ++k) out(rows[k]) += scale * values[k] * v(cols[k]);
  }
};

// Dense part of the generator; fixed-size storage for the 4-level case.
template <typename Dense>
struct Generator {
  Dense constant;
  Entries raising;   // multiplies e^{+iwt}
  Entries lowering;  // multiplies e^{-iwt}
  double w = 0.0;
  bool oscillates = false;
  std::vector<Entries> modulated;
  std::vector<std::function<double(double)>> coefficients;

  template <typename Vec>
  void apply(double t, const Vec& v, Vec& out) const {
    out.noalias() = constant * v;
    if (oscillates) {
      const Complex phase = std::exp(kI * (w * t));
      raising.add_product(phase, v, out);
      lowering.add_product(std::conj(phase), v, out);
    }
    for (std::size_t j = 0; j < modulated.size(); ++j) {
      const double c = coefficients[j](t);
      if (c != 0.0) modulated[j].add_product(Complex(c), v, out);
    }
  }
};

// A density matrix has |rho_ij| <= 1 and non-negative populations; RK4 run
// past its stability limit breaks this long before the trace drifts, since
// every stage preserves the trace exactly.
template <typename Vec>
bool bounded(const Vec& v, Eigen::Index dim) {
  if (v.cwiseAbs().maxCoeff() > 1.0 + 1e-6) return false;
  for (Eigen::Index k = 0; k < dim; ++k) {
    if (v(k * dim + k).real() < -1e-6) return false;
  }
  return true;
}

template <typename Vec>
double trace_of(const Vec& v, Eigen::Index dim, Complex* trace_out = nullptr) {
  Complex tr = 0.0;
  for (Eigen::Index k = 0; k < dim; ++k) tr += v(k * dim + k);
  if (trace_out) *trace_out = tr;
  return std::abs(tr - 1.0);
}

// Returns false if the trace tolerance was violated.
template <typename Dense>
bool integrate(const Generator<Dense>& gen, const Vector& start, Eigen::Index dim, double duration,
               long steps, const PropagationOptions& options,
               const std::vector<Matrix>& observables_t, Trajectory& out) {
  const double h = duration / static_cast<double>(steps);
  using Vec = Eigen::Matrix<Complex, Dense::RowsAtCompileTime, 1>;
  const Eigen::Index size = start.size();
  Vec v = start;
  Vec k1(size), k2(size), k3(size), k4(size), tmp(size);

  out = Trajectory{};
  out.step = h;
  out.times.reserve(static_cast<std::size_t>(steps) + 1);
  out.observables.assign(observables_t.size(), {});
  for (auto& series : out.observables) series.reserve(static_cast<std::size_t>(steps) + 1);

  auto record = [&](long i, double t) {
    out.times.push_back(t);
    for (std::size_t j = 0; j < observables_t.size(); ++j) {
      // trace(O rho) = sum_{ab} O_ab rho_ba = vec(O^T) . vec(rho)
      out.observables[j].push_back(
          (Eigen::Map<const Vector>(observables_t[j].data(), size).cwiseProduct(v)).sum());
    }
    const bool keep = i == 0 || i == steps ||
                      (options.state_stride > 0 && i % options.state_stride == 0);
    if (keep) {
      Matrix rho = unvectorize(v, dim);
      out.hermiticity_error =
          std::max(out.hermiticity_error, (rho - rho.adjoint()).cwiseAbs().maxCoeff());
      out.state_times.push_back(t);
      out.states.push_back(DensityMatrix::unchecked(0.5 * (rho + rho.adjoint())));
    }
  };

  record(0, 0.0);
  for (long i = 0; i < steps; ++i) {
    const double t = h * static_cast<double>(i);
    gen.apply(t, v, k1);
    tmp = v + (0.5 * h) * k1;
    gen.apply(t + 0.5 * h, tmp, k2);
    tmp = v + (0.5 * h) * k2;
    gen.apply(t + 0.5 * h, tmp, k3);
    tmp = v + h * k3;
    gen.apply(t + h, tmp, k4);
    v += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (trace_of(v, dim) > options.trace_tolerance || !std::isfinite(v.norm()) || !bounded(v, dim)) {
      return false;
    }
    // Avoid accumulating t by repeated addition.
    record(i + 1, i + 1 == steps ? duration : h * static_cast<double>(i + 1));
  }
  return true;
}

template <typename Dense>
Trajectory run(const Operator& h_static, const std::optional<OscillatingTerm>& oscillating,
               std::span<const CollapseChannel> channels, const DensityMatrix& initial,
               double duration, double step, const PropagationOptions& options) {
  const Eigen::Index dim = h_static.dim();
  Generator<Dense> gen;
  gen.constant = build_liouvillian(h_static, channels).matrix();
  if (oscillating) {
    if (oscillating->op.dim() != dim) {
      throw InvalidArgument("propagate: oscillating term dimension mismatch");
    }
    gen.oscillates = true;
    gen.w = oscillating->angular_frequency;
    gen.raising = Entries::from(commutator_superoperator(oscillating->op));
    gen.lowering = Entries::from(commutator_superoperator(oscillating->op.adjoint()));
  }
  for (const auto& term : options.modulations) {
    if (term.op.dim() != dim) throw InvalidArgument("propagate: modulation dimension mismatch");
    if (!term.op.is_hermitian()) throw InvalidArgument("propagate: modulation operator not Hermitian");
    gen.modulated.push_back(Entries::from(commutator_superoperator(term.op)));
    gen.coefficients.push_back(term.coefficient);
  }

  std::vector<Matrix> observables_t;
  for (const auto& o : options.observables) {
    if (o.dim() != dim) throw InvalidArgument("propagate: observable dimension mismatch");
    observables_t.push_back(o.matrix().transpose());
  }

  const Vector start = vectorize(initial.matrix());
  long steps = std::max(1L, static_cast<long>(std::ceil(duration / step - 1e-9)));
  Trajectory out;
  while (true) {
    if (duration / static_cast<double>(steps) < options.min_step) {
      std::ostringstream msg;
      msg << "propagate: unstable or trace drift above " << options.trace_tolerance
          << " even at step " << duration / static_cast<double>(steps / 2);
      throw ConvergenceError(msg.str());
    }
    if (integrate(gen, start, dim, duration, steps, options, observables_t, out)) break;
    steps *= 2;
  }
  return out;
}

}  // namespace

Trajectory propagate(const Operator& h_static, const std::optional<OscillatingTerm>& oscillating,
                     std::span<const CollapseChannel> channels, const DensityMatrix& initial,
                     double duration, double step, const PropagationOptions& options) {
  const Eigen::Index dim = h_static.dim();
  if (initial.dim() != dim) throw InvalidArgument("propagate: initial state dimension mismatch");
  if (!(step > 0.0)) throw InvalidArgument("propagate: step must be positive");
  if (!(duration >= step)) throw InvalidArgument("propagate: duration must be at least one step");

  if (dim == 4) {
    return run<Eigen::Matrix<Complex, 16, 16>>(h_static, oscillating, channels, initial, duration,
                                               step, options);
  }
  return run<Matrix>(h_static, oscillating, channels, initial, duration, step, options);
}

}  // namespace nvdress::quantum
