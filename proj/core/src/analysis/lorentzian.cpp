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


#include "nvdress/analysis/lorentzian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>

#include "nvdress/errors.hpp"

namespace nvdress::analysis {
namespace {

double sign_of(PeakSign s) { return s == PeakSign::Dip ? -1.0 : 1.0; }

double min_spacing(const std::vector<double>& x) {
  double h = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < x.size(); ++i) h = std::min(h, std::abs(x[i] - x[i - 1]));
  return h;
}

// Flat parameter vector <-> model.
Eigen::VectorXd pack(const LorentzianModel& m, int order) {
  const auto np = static_cast<Eigen::Index>(3 * m.peaks.size());
  Eigen::VectorXd p(1 + np + order);
  p(0) = m.baseline;
  for (std::size_t k = 0; k < m.peaks.size(); ++k) {
    p(1 + 3 * k) = m.peaks[k].center;
    p(2 + 3 * k) = m.peaks[k].fwhm;
    p(3 + 3 * k) = m.peaks[k].amplitude;
  }
  if (order >= 1) p(1 + np) = m.slope;
  if (order >= 2) p(2 + np) = m.curvature;
  return p;
}

void unpack(const Eigen::VectorXd& p, int order, LorentzianModel& m) {
  const auto np = static_cast<Eigen::Index>(3 * m.peaks.size());
  m.baseline = p(0);
  for (std::size_t k = 0; k < m.peaks.size(); ++k) {
    m.peaks[k].center = p(1 + 3 * k);
    m.peaks[k].fwhm = p(2 + 3 * k);
    m.peaks[k].amplitude = p(3 + 3 * k);
  }
  m.slope = order >= 1 ? p(1 + np) : 0.0;
  m.curvature = order >= 2 ? p(2 + np) : 0.0;
}

struct Problem {
  const std::vector<double>& x;
  const std::vector<double>& y;
  Eigen::VectorXd sqrt_w;
  std::vector<double> signs;
  int order = 0;
  double reference = 0.0;

  // Weighted residuals and the Jacobian with respect to raw parameters.
  void evaluate(const Eigen::VectorXd& p, Eigen::VectorXd& r, Eigen::MatrixXd* jac) const {
    const auto m = static_cast<Eigen::Index>(x.size());
    const auto n_peaks = signs.size();
    r.resize(m);
    if (jac) jac->resize(m, p.size());
    for (Eigen::Index i = 0; i < m; ++i) {
      double value = p(0);
      if (jac) (*jac)(i, 0) = 1.0;
      for (std::size_t k = 0; k < n_peaks; ++k) {
        const double c = p(1 + 3 * k), w = p(2 + 3 * k), a = p(3 + 3 * k), s = signs[k];
        const double h = 0.5 * w, d = x[i] - c;
        const double den = d * d + h * h;
        const double g = h * h / den;
        value += s * a * g;
        if (jac) {
          const auto col = static_cast<Eigen::Index>(1 + 3 * k);
          (*jac)(i, col) = s * a * 2.0 * d * h * h / (den * den);
          (*jac)(i, col + 1) = s * a * 0.5 * (2.0 * h * d * d / (den * den));
          (*jac)(i, col + 2) = s * g;
        }
      }
      const auto nb = static_cast<Eigen::Index>(1 + 3 * n_peaks);
      const double u = x[i] - reference;
      if (order >= 1) {
        value += p(nb) * u;
        if (jac) (*jac)(i, nb) = u;
      }
      if (order >= 2) {
        value += p(nb + 1) * u * u;
        if (jac) (*jac)(i, nb + 1) = u * u;
      }
      r(i) = sqrt_w(i) * (value - y[i]);
      if (jac) jac->row(i) *= sqrt_w(i);
    }
  }
};

}  // namespace

double LorentzianPeak::area() const { return 0.5 * std::numbers::pi * std::abs(amplitude) * fwhm; }

double LorentzianModel::operator()(double x) const {
  const double u = x - reference;
  double v = baseline + slope * u + curvature * u * u;
  for (const auto& pk : peaks) {
    const double h = 0.5 * pk.fwhm, d = x - pk.center;
    v += sign_of(pk.sign) * pk.amplitude * h * h / (d * d + h * h);
  }
  return v;
}

void LorentzianModel::validate() const {
  for (const auto& pk : peaks) {
    if (!(pk.fwhm > 0.0)) throw InvalidArgument("lorentzian: fwhm must be > 0");
  }
}

FitResult fit_lorentzians(const Spectrum& spectrum, std::size_t n_peaks,
                          const LorentzianModel& init, const FitOptions& options) {
  if (n_peaks < 1) throw InvalidArgument("fit: need at least one peak");
  if (init.peaks.size() != n_peaks) throw InvalidArgument("fit: initial model has wrong peak count");
  init.validate();
  if (spectrum.signal.size() != spectrum.detunings.size()) {
    throw InvalidArgument("fit: signal/grid length mismatch");
  }
  if (options.baseline_order < 0 || options.baseline_order > 2) {
    throw InvalidArgument("fit: baseline_order must be 0, 1 or 2");
  }
  const int order = options.baseline_order;
  const std::size_t n_par = 1 + 3 * n_peaks + static_cast<std::size_t>(order);
  const bool shared = options.shared_width && n_peaks > 1;
  const std::size_t n_free = shared ? n_par - (n_peaks - 1) : n_par;
  if (spectrum.size() <= n_free) throw InvalidArgument("fit: fewer points than parameters");

  // Free parameters map onto the full layout through a 0/1 matrix; a shared
  // width fans out to every peak's width slot.
  Eigen::MatrixXd tie = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_par),
                                              static_cast<Eigen::Index>(n_free));
  {
    Eigen::Index col = 0;
    for (Eigen::Index row = 0; row < tie.rows(); ++row) {
      const bool width_slot = row >= 1 && row < static_cast<Eigen::Index>(1 + 3 * n_peaks) &&
                              (row - 1) % 3 == 1;
      if (shared && width_slot && row != 2) {
        tie(row, 2) = 1.0;
      } else {
        tie(row, col++) = 1.0;
      }
    }
  }

  const auto [lo_it, hi_it] = std::minmax_element(spectrum.detunings.begin(), spectrum.detunings.end());
  double widest = 0.0;
  for (const auto& pk : init.peaks) widest = std::max(widest, pk.fwhm);
  if (*hi_it - *lo_it < 3.0 * widest) {
    throw InvalidArgument("fit: grid must span at least 3x the widest initial fwhm");
  }
  const double width_floor = min_spacing(spectrum.detunings);

  Problem prob{spectrum.detunings, spectrum.signal,
               Eigen::VectorXd::Ones(static_cast<Eigen::Index>(spectrum.size())), {}};
  if (options.use_standard_error && spectrum.has_standard_error()) {
    for (std::size_t i = 0; i < spectrum.size(); ++i) {
      const double e = spectrum.standard_error[i];
      if (!(e > 0.0)) throw InvalidArgument("fit: standard errors must be > 0 for weighting");
      prob.sqrt_w(static_cast<Eigen::Index>(i)) = 1.0 / e;
    }
  }
  for (const auto& pk : init.peaks) prob.signs.push_back(sign_of(pk.sign));
  prob.order = order;
  prob.reference = 0.5 * (*lo_it + *hi_it);

  // Work in units where every parameter is O(1).
  double y_scale = 0.0;
  for (double v : spectrum.signal) y_scale = std::max(y_scale, std::abs(v));
  if (y_scale == 0.0) y_scale = 1.0;
  Eigen::VectorXd scale(n_par);
  scale(0) = y_scale;
  for (std::size_t k = 0; k < n_peaks; ++k) {
    scale(1 + 3 * k) = init.peaks[k].fwhm;
    scale(2 + 3 * k) = init.peaks[k].fwhm;
    scale(3 + 3 * k) = y_scale;
  }
  const double half_span = std::max(0.5 * (*hi_it - *lo_it), 1e-300);
  if (order >= 1) scale(static_cast<Eigen::Index>(1 + 3 * n_peaks)) = y_scale / half_span;
  if (order >= 2) scale(static_cast<Eigen::Index>(2 + 3 * n_peaks)) = y_scale / (half_span * half_span);
  // Each free parameter takes the scale of the first slot it feeds.
  Eigen::VectorXd free_scale(static_cast<Eigen::Index>(n_free));
  for (Eigen::Index c = 0; c < tie.cols(); ++c) {
    Eigen::Index r = 0;
    while (tie(r, c) == 0.0) ++r;
    free_scale(c) = scale(r);
  }
  const Eigen::MatrixXd lift = tie * free_scale.asDiagonal();

  FitResult result;
  result.model = init;
  result.model.reference = prob.reference;
  LorentzianModel start = init;
  if (order < 1) start.slope = 0.0;
  if (order < 2) start.curvature = 0.0;
  if (shared) {
    double mean = 0.0;
    for (const auto& pk : start.peaks) mean += pk.fwhm / static_cast<double>(n_peaks);
    for (auto& pk : start.peaks) pk.fwhm = mean;
  }
  // Carry the initial baseline polynomial over to the new reference point.
  const double shift = prob.reference - init.reference;
  start.baseline += start.slope * shift + start.curvature * shift * shift;
  start.slope += 2.0 * start.curvature * shift;
  Eigen::VectorXd p = pack(start, order);
  Eigen::VectorXd r, r_trial;
  Eigen::MatrixXd jac;
  prob.evaluate(p, r, &jac);
  double cost = 0.5 * r.squaredNorm();
  const double cost_scale = 0.5 * (prob.sqrt_w.array() * Eigen::Map<const Eigen::VectorXd>(
                                       spectrum.signal.data(), r.size()).array()).square().sum();
  double lambda = options.initial_damping;
  bool done = false;

  auto clamp_widths = [&](Eigen::VectorXd& q) {
    for (std::size_t k = 0; k < n_peaks; ++k) q(2 + 3 * k) = std::max(q(2 + 3 * k), width_floor);
  };

  int it = 0;
  for (; it < options.max_iterations && !done; ++it) {
    const Eigen::MatrixXd js = jac * lift;
    const Eigen::MatrixXd a = js.transpose() * js;
    const Eigen::VectorXd g = js.transpose() * r;
    if (cost <= 1e-30 * cost_scale) {
      result.converged = true;
      result.message = "exact fit";
      break;
    }
    const double diag_floor = 1e-12 * a.diagonal().maxCoeff();
    bool accepted = false;
    while (!accepted) {
      Eigen::MatrixXd damped = a;
      for (Eigen::Index j = 0; j < a.rows(); ++j) {
        damped(j, j) += lambda * std::max(a(j, j), diag_floor);
      }
      const Eigen::VectorXd du = damped.ldlt().solve(-g);
      Eigen::VectorXd trial = p + lift * du;
      clamp_widths(trial);
      prob.evaluate(trial, r_trial, nullptr);
      const double trial_cost = 0.5 * r_trial.squaredNorm();
      if (std::isfinite(trial_cost) && trial_cost <= cost) {
        const double change = cost - trial_cost;
        p = trial;
        prob.evaluate(p, r, &jac);
        const double old = cost;
        cost = trial_cost;
        lambda = std::max(lambda / 10.0, 1e-15);
        accepted = true;
        if (change <= options.relative_cost_tolerance * old) {
          result.converged = true;
          result.message = "relative cost change below tolerance";
          done = true;
        }
      } else {
        lambda *= 10.0;
        if (lambda > 1e16) {
          // No descent direction left: a minimum to working precision.
          const double rel_grad = g.norm() / (js.norm() * r.norm() + 1e-300);
          result.converged = rel_grad <= 1e-6;
          result.message = result.converged ? "stalled at minimum" : "damping overflow";
          done = true;
          break;
        }
      }
    }
  }
  if (!done && !result.converged) result.message = "iteration limit reached";
  result.iterations = it;

  unpack(p, order, result.model);
  prob.evaluate(p, r, &jac);
  const Eigen::MatrixXd js = jac * lift;
  const Eigen::MatrixXd a = js.transpose() * js;
  result.gradient_norm = (js.transpose() * r).norm() / y_scale;
  result.residual_rms = std::sqrt(r.squaredNorm() / static_cast<double>(r.size()));

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a);
  const double ev_max = eig.eigenvalues().maxCoeff();
  const double ev_min = eig.eigenvalues().minCoeff();
  result.condition_number = ev_min > 0.0 ? ev_max / ev_min : std::numeric_limits<double>::infinity();
  if (!(ev_min > 1e-15 * ev_max)) {
    std::ostringstream msg;
    msg << "fit: singular normal equations (condition number " << result.condition_number
        << ", smallest eigenvalue " << ev_min << ")";
    throw NumericalError(msg.str());
  }
  const double dof = static_cast<double>(r.size()) - static_cast<double>(n_free);
  const bool weighted = options.use_standard_error && spectrum.has_standard_error();
  const double variance = weighted ? 1.0 : r.squaredNorm() / dof;
  const Eigen::MatrixXd cov_u = variance * a.inverse();
  result.covariance = lift * cov_u * lift.transpose();
  result.covariance = 0.5 * (result.covariance + result.covariance.transpose()).eval();
  return result;
}

namespace {

Measured param(const FitResult& fit, std::size_t which, std::size_t offset) {
  if (which >= fit.model.peaks.size()) throw InvalidArgument("fit: peak index out of range");
  if (!fit.converged) throw NumericalError("fit: result did not converge (" + fit.message + ")");
  const auto idx = static_cast<Eigen::Index>(1 + 3 * which + offset);
  const auto& pk = fit.model.peaks[which];
  const double v = offset == 0 ? pk.center : offset == 1 ? pk.fwhm : pk.amplitude;
  return {v, std::sqrt(std::max(0.0, fit.covariance(idx, idx)))};
}

double interpolate(const Spectrum& s, double x) {
  const auto& xs = s.detunings;
  if (x <= xs.front()) return s.signal.front();
  if (x >= xs.back()) return s.signal.back();
  const auto it = std::upper_bound(xs.begin(), xs.end(), x);
  const auto i = static_cast<std::size_t>(it - xs.begin());
  const double f = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
  return (1.0 - f) * s.signal[i - 1] + f * s.signal[i];
}

}  // namespace

Measured fwhm_of(const FitResult& fit, std::size_t which) { return param(fit, which, 1); }
Measured center_of(const FitResult& fit, std::size_t which) { return param(fit, which, 0); }
Measured amplitude_of(const FitResult& fit, std::size_t which) { return param(fit, which, 2); }

LorentzianModel seed_at(const Spectrum& spectrum, std::span<const double> centers,
                        double fwhm_guess) {
  if (spectrum.size() == 0) throw InvalidArgument("seed: empty spectrum");
  LorentzianModel m;
  m.baseline = *std::max_element(spectrum.signal.begin(), spectrum.signal.end());
  for (double c : centers) {
    const double depth = std::max(m.baseline - interpolate(spectrum, c), 1e-6 * std::abs(m.baseline));
    m.peaks.push_back({c, fwhm_guess, depth, PeakSign::Dip});
  }
  return m;
}

LorentzianModel seed_from_minima(const Spectrum& spectrum, std::size_t n_dips) {
  const auto& x = spectrum.detunings;
  const auto& y = spectrum.signal;
  if (x.size() < 3) throw InvalidArgument("seed: need at least 3 points");
  LorentzianModel m;
  m.baseline = *std::max_element(y.begin(), y.end());
  std::vector<std::size_t> minima;
  for (std::size_t i = 1; i + 1 < y.size(); ++i) {
    if (y[i] < y[i - 1] && y[i] <= y[i + 1] && y[i] < m.baseline) minima.push_back(i);
  }
  std::sort(minima.begin(), minima.end(), [&](auto a, auto b) { return y[a] < y[b]; });
  if (minima.size() > n_dips) minima.resize(n_dips);
  std::sort(minima.begin(), minima.end());
  for (std::size_t i : minima) {
    const double depth = m.baseline - y[i];
    const double half = y[i] + 0.5 * depth;
    std::size_t l = i, r = i;
    while (l > 0 && y[l] < half) --l;
    while (r + 1 < y.size() && y[r] < half) ++r;
    const double w = std::max(x[r] - x[l], 2.0 * min_spacing(x));
    m.peaks.push_back({x[i], w, depth, PeakSign::Dip});
  }
  return m;
}

Spectrum slice(const Spectrum& spectrum, double lo, double hi) {
  Spectrum out;
  out.metadata = spectrum.metadata;
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    const double x = spectrum.detunings[i];
    if (x < lo || x > hi) continue;
    out.detunings.push_back(x);
    out.signal.push_back(spectrum.signal[i]);
    if (spectrum.has_standard_error()) out.standard_error.push_back(spectrum.standard_error[i]);
  }
  return out;
}

}  // namespace nvdress::analysis
