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


#include "nvdress/experiments/cpt.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "nvdress/detail/parallel.hpp"
#include "nvdress/errors.hpp"
#include "nvdress/nv/dressed.hpp"
#include "nvdress/nv/hamiltonian.hpp"
#include "nvdress/quantum/propagate.hpp"
#include "nvdress/quantum/steady_state.hpp"

namespace nvdress::experiments {
namespace {

using quantum::DensityMatrix;
using quantum::Operator;

constexpr double kPi = std::numbers::pi;
constexpr double kLoopClosure = 1e-9;  // MHz

std::string num(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

// The bare case drops |0>: it is decoupled and would make the steady state
// non-unique.
nv::SystemConfig effective_system(const CptOptions& o) {
  nv::SystemConfig cfg = o.system;
  if (o.omega_m_mhz == 0.0 && cfg.levels == nv::LevelSet::Full && o.rates.branch_zero == 0.0) {
    cfg.levels = nv::LevelSet::Lambda;
  }
  return cfg;
}

InitialState effective_initial(const CptOptions& o) {
  if (o.initial) return *o.initial;
  return o.omega_m_mhz > 0.0 ? InitialState::Zero : InitialState::Plus;
}

DensityMatrix initial_state(const nv::SystemConfig& cfg, InitialState which) {
  const Eigen::Index n = cfg.block_dim();
  switch (which) {
    case InitialState::Zero:
      if (!cfg.has(nv::Level::Zero)) throw InvalidArgument("initial state |0> is not in the model");
      return DensityMatrix::pure(n, cfg.index(nv::Level::Zero));
    case InitialState::Plus:
      return DensityMatrix::pure(n, cfg.index(nv::Level::Plus));
    case InitialState::SpinMixture: {
      quantum::Matrix m = quantum::Matrix::Zero(n, n);
      m(cfg.index(nv::Level::Plus), cfg.index(nv::Level::Plus)) = 0.5;
      m(cfg.index(nv::Level::Minus), cfg.index(nv::Level::Minus)) = 0.5;
      return DensityMatrix(m);
    }
  }
  throw InvalidArgument("unknown initial state");
}

// Time average of a sampled function over [a, b] by clipped trapezoids.
double window_average(const std::vector<double>& t, const std::vector<quantum::Complex>& f,
                      double a, double b) {
  double acc = 0.0;
  for (std::size_t k = 1; k < t.size(); ++k) {
    const double t0 = std::max(t[k - 1], a), t1 = std::min(t[k], b);
    if (t1 <= t0) continue;
    const double span = t[k] - t[k - 1];
    auto at = [&](double x) {
      const double u = (x - t[k - 1]) / span;
      return (1.0 - u) * f[k - 1].real() + u * f[k].real();
    };
    acc += 0.5 * (at(t0) + at(t1)) * (t1 - t0);
  }
  return acc / (b - a);
}

std::vector<double> loop_phases(const CptOptions& o, const noise::BathSample& bath, bool closed) {
  if (o.loop_phase_rad) return {*o.loop_phase_rad};
  const int k = o.loop_phase_points;
  auto node = [k](long j) { return 2.0 * kPi * (static_cast<double>(j % k) + 0.5) / k; };
  if (o.mode == SpectrumMode::Steady) {
    // Away from loop closure the cycle-averaged state does not depend on the phase.
    if (!closed) return {kPi};
    std::vector<double> all;
    for (int j = 0; j < k; ++j) all.push_back(node(j));
    return all;
  }
  // Pulsed: stratify the phase nodes over the ensemble members.
  const int n = o.noise.n_samples;
  const int per_sample = (k + n - 1) / n;
  std::vector<double> out;
  for (int q = 0; q < per_sample; ++q) {
    out.push_back(node(static_cast<long>(bath.index) * per_sample + q));
  }
  return out;
}

double block_emission(const CptOptions& o, const nv::SystemConfig& cfg, Eigen::Index block,
                      double delta, double theta, const noise::BathSample& bath) {
  const auto drives = cpt_drives(o.omega_m_mhz, o.omega_0_mhz, delta, cfg.zeeman_mhz, theta);
  const double gamma_e = quantum::to_angular(o.rates.excited_decay_mhz);
  const auto channels = nv::block_collapse_operators(cfg, o.rates);
  const Eigen::Index e = cfg.index(nv::Level::Excited);

  if (o.mode == SpectrumMode::Steady) {
    const auto h = nv::build_block_hamiltonian(cfg, drives, bath.delta_n_mhz, bath.delta_opt_mhz, block);
    const auto l0 = quantum::build_liouvillian(h.static_part, channels);
    if (!h.oscillating) return gamma_e * quantum::steady_state(l0).population(e);
    const auto ps = quantum::periodic_steady_state(
        l0, quantum::commutator_superoperator(h.oscillating->op),
        quantum::commutator_superoperator(h.oscillating->op.adjoint()),
        h.oscillating->angular_frequency);
    return gamma_e * ps.average.population(e);
  }

  const double static_shift = bath.time_dependent() ? 0.0 : bath.delta_n_mhz;
  const auto h = nv::build_block_hamiltonian(cfg, drives, static_shift, bath.delta_opt_mhz, block);
  nv::SystemConfig single = cfg;
  single.hyperfine = false;
  quantum::PropagationOptions popt;
  popt.observables.push_back(Operator::projector(cfg.block_dim(), e));
  popt.state_stride = 0;
  if (bath.time_dependent()) {
    popt.modulations.push_back({nv::zeeman_shift_operator(single), [&bath](double t) {
                                  return quantum::to_angular(bath.delta_n_at(t));
                                }});
  }
  const auto traj = quantum::propagate(h.static_part, h.oscillating, channels,
                                       initial_state(cfg, effective_initial(o)),
                                       o.schedule.duration_us, o.schedule.step_us, popt);
  return gamma_e * window_average(traj.times, traj.observables[0], o.schedule.window_start_us,
                                  o.schedule.window_end());
}

double point_emission(const CptOptions& o, const nv::SystemConfig& cfg, double delta,
                      const noise::BathSample& bath) {
  const bool closed = std::abs(delta - cfg.zeeman_mhz) <= kLoopClosure;
  const auto phases = loop_phases(o, bath, closed);
  double acc = 0.0;
  for (Eigen::Index b = 0; b < cfg.block_count(); ++b) {
    for (double theta : phases) acc += block_emission(o, cfg, b, delta, theta, bath);
  }
  const double v =
      acc / static_cast<double>(phases.size() * static_cast<std::size_t>(cfg.block_count()));
  // Round-off can leave a perfectly dark state a hair below zero.
  return v < 0.0 && v > -1e-9 ? 0.0 : v;
}

std::map<std::string, std::string> describe(const CptOptions& o, const nv::SystemConfig& cfg) {
  std::map<std::string, std::string> m;
  m["mode"] = o.mode == SpectrumMode::Steady ? "steady" : "pulsed";
  m["omega_m_mhz"] = num(o.omega_m_mhz);
  m["omega_0_mhz"] = num(o.omega_0_mhz);
  m["zeeman_mhz"] = num(cfg.zeeman_mhz);
  m["levels"] = cfg.levels == nv::LevelSet::Full     ? "full"
                : cfg.levels == nv::LevelSet::Lambda ? "lambda"
                                                     : "spin_only";
  m["hyperfine"] = cfg.hyperfine ? num(cfg.hyperfine_mhz) : "off";
  m["loop_phase"] = o.loop_phase_rad ? num(*o.loop_phase_rad)
                                     : "averaged/" + std::to_string(o.loop_phase_points);
  if (o.mode == SpectrumMode::Pulsed) {
    m["pulse_us"] = num(o.schedule.duration_us);
    m["step_us"] = num(o.schedule.step_us);
  }
  return m;
}

}  // namespace

void PulseSchedule::validate() const {
  if (!(step_us > 0.0) || !(duration_us > step_us)) {
    throw InvalidArgument("schedule: need 0 < dt < T");
  }
  if (!(window_start_us >= 0.0) || !(window_end() <= duration_us) ||
      !(window_end() > window_start_us)) {
    throw InvalidArgument("schedule: emission window must lie within the pulse");
  }
}

void CptOptions::validate() const {
  system.validate();
  rates.validate();
  noise.validate();
  if (!(omega_m_mhz >= 0.0) || !(omega_0_mhz >= 0.0)) {
    throw InvalidArgument("cpt: Rabi frequencies must be >= 0");
  }
  if (!system.has(nv::Level::Excited)) throw InvalidArgument("cpt: the model needs |e>");
  if (loop_phase_points < 1) throw InvalidArgument("cpt: loop_phase_points must be >= 1");
  if (mode == SpectrumMode::Pulsed) schedule.validate();
  if (mode == SpectrumMode::Steady && noise.time_dependent()) {
    throw InvalidArgument("cpt: steady mode needs static noise");
  }
}

double power_to_rabi(double power_nw, double calibration_mhz) {
  if (!(power_nw >= 0.0)) throw InvalidArgument("power_to_rabi: power must be >= 0");
  return calibration_mhz * std::sqrt(power_nw);
}

std::vector<nv::DriveField> cpt_drives(double omega_m, double omega_0, double delta,
                                       double zeeman, double theta) {
  using nv::DriveKind;
  using nv::Level;
  std::vector<nv::DriveField> d;
  if (omega_m > 0.0) {
    d.push_back({DriveKind::Microwave, Level::Zero, Level::Plus, omega_m, 0.0, 0.0});
    d.push_back({DriveKind::Microwave, Level::Zero, Level::Minus, omega_m, 0.0, 0.0});
  }
  const double half = 0.5 * (delta - zeeman);
  d.push_back({DriveKind::Optical, Level::Minus, Level::Excited, omega_0, half, theta + kPi});
  d.push_back({DriveKind::Optical, Level::Plus, Level::Excited, omega_0, -half, 0.0});
  return d;
}

std::complex<double> analytic_cpt(double delta, double resonance, double rabi, double gamma,
                                  double gamma_s, double n_plus, double n_minus) {
  if (!(gamma > 0.0)) throw InvalidArgument("analytic_cpt: gamma must be > 0");
  if (!(gamma_s >= 0.0)) throw InvalidArgument("analytic_cpt: gamma_s must be >= 0");
  for (double n : {n_plus, n_minus}) {
    if (!(n >= 0.0 && n <= 1.0)) throw InvalidArgument("analytic_cpt: populations must be in [0, 1]");
  }
  using quantum::to_angular;
  const double g = to_angular(gamma), o2 = to_angular(rabi) * to_angular(rabi);
  const std::complex<double> den(to_angular(gamma_s) + o2 / (2.0 * g), to_angular(delta - resonance));
  return -o2 * (n_plus + n_minus) / (4.0 * g) / den;
}

double analytic_cpt_fwhm(double rabi, double gamma, double gamma_s) {
  if (!(gamma > 0.0)) throw InvalidArgument("analytic_cpt: gamma must be > 0");
  return 2.0 * gamma_s + rabi * rabi / gamma;
}

LambdaCoherence lambda_coherence(const nv::SystemConfig& system, const nv::RelaxationRates& rates,
                                 double omega_0, double delta) {
  nv::SystemConfig cfg = system;
  cfg.levels = nv::LevelSet::Lambda;
  cfg.hyperfine = false;
  const auto drives = cpt_drives(0.0, omega_0, delta, cfg.zeeman_mhz, kPi);
  const auto h = nv::build_hamiltonian(cfg, drives, 0.0, 0.0);
  const auto channels = nv::collapse_operators(cfg, rates);
  const auto l0 = quantum::build_liouvillian(h.static_part, channels);
  const DensityMatrix rho =
      h.oscillating ? quantum::periodic_steady_state(
                          l0, quantum::commutator_superoperator(h.oscillating->op),
                          quantum::commutator_superoperator(h.oscillating->op.adjoint()),
                          h.oscillating->angular_frequency)
                          .average
                    : quantum::steady_state(l0);
  const Eigen::Index p = cfg.index(nv::Level::Plus), m = cfg.index(nv::Level::Minus);
  return {rho.matrix()(m, p), rho.population(p), rho.population(m)};
}

Spectrum cpt_spectrum_sample(const CptOptions& options, std::span<const double> grid,
                             const noise::BathSample& bath) {
  const nv::SystemConfig cfg = effective_system(options);
  Spectrum s;
  s.detunings.assign(grid.begin(), grid.end());
  s.signal.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    s.signal[i] = point_emission(options, cfg, grid[i], bath);
  }
  s.metadata = describe(options, cfg);
  return s;
}

Spectrum cpt_spectrum(const CptOptions& options, std::span<const double> grid) {
  options.validate();
  if (grid.empty()) throw InvalidArgument("cpt: empty detuning grid");
  const nv::SystemConfig cfg = effective_system(options);
  Spectrum out;
  if (options.noise.n_samples == 1) {
    // One realization: spread the grid over the workers instead.
    const auto bath = noise::sample(options.noise, 0,
                                    {options.schedule.duration_us, options.schedule.step_us});
    out.detunings.assign(grid.begin(), grid.end());
    out.signal.resize(grid.size());
    detail::parallel_for(grid.size(), options.workers, [&](std::size_t i) {
      out.signal[i] = point_emission(options, cfg, grid[i], bath);
    });
    out.metadata = describe(options, cfg);
    out.metadata["noise.n_samples"] = "1";
    out.metadata["noise.seed"] = std::to_string(options.noise.seed);
  } else {
    noise::EnsembleOptions eo;
    eo.window = {options.schedule.duration_us, options.schedule.step_us};
    eo.workers = options.workers;
    out = noise::ensemble_average(
        options.noise,
        [&](const noise::BathSample& bath) { return cpt_spectrum_sample(options, grid, bath); }, eo);
  }
  out.validate();
  return out;
}

analysis::FitResult fit_cpt_resonances(const Spectrum& spectrum, double omega_m, double zeeman,
                                       double fwhm_guess, int baseline_order) {
  std::vector<double> centers;
  if (omega_m > 0.0) {
    const auto pos = nv::cpt_resonance_positions(omega_m, zeeman);
    centers.assign(pos.begin(), pos.end());
  } else {
    centers.push_back(zeeman);
  }
  const auto init = analysis::seed_at(spectrum, centers, fwhm_guess);
  analysis::FitOptions fo;
  fo.baseline_order = baseline_order;
  return analysis::fit_lorentzians(spectrum, centers.size(), init, fo);
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  if (n == 0) return {};
  if (n == 1) return {0.5 * (lo + hi)};
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  // Pin the symmetric midpoint to exact zero offset.
  if (n % 2 == 1) out[n / 2] = 0.5 * (lo + hi);
  return out;
}

}  // namespace nvdress::experiments
