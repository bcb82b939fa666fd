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


#include "nvdress/experiments/sweeps.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nvdress/errors.hpp"

namespace nvdress::experiments {
namespace {

// FWHM of a Gaussian in units of its standard deviation.
const double kGaussFwhm = 2.0 * std::sqrt(2.0 * std::log(2.0));

struct Measurement {
  SweepPoint point;
  analysis::FitResult fit;
};

std::size_t odd_count(double span, double spacing, std::size_t max_points) {
  auto n = static_cast<std::size_t>(std::ceil(span / spacing)) + 1;
  n = std::clamp<std::size_t>(n, 21, max_points);
  return n % 2 == 1 ? n : n - 1;
}

analysis::FitResult fit_window(const CptOptions& o, double center, double half, double w,
                               const GridPolicy& grid, Spectrum* spectrum_out) {
  const auto n = odd_count(2.0 * half, w / grid.points_per_fwhm, grid.max_points);
  const Spectrum spectrum = cpt_spectrum(o, linspace(center - half, center + half, n));
  if (spectrum_out) *spectrum_out = spectrum;
  const std::array<double, 1> c{center};
  analysis::FitOptions fo;
  fo.baseline_order = 2;
  return analysis::fit_lorentzians(spectrum, 1, analysis::seed_at(spectrum, c, w), fo);
}

void fill(SweepPoint& p, const analysis::FitResult& fit, std::size_t peak) {
  p.iterations += fit.iterations;
  p.residual_rms = std::max(p.residual_rms, fit.residual_rms);
  const auto f = analysis::fwhm_of(fit, peak);
  p.fwhm_mhz = f.value;
  p.fwhm_error_mhz = f.error;
  p.center_mhz = analysis::center_of(fit, peak).value;
}

// Central: one dip in a window reaching at most halfway to the first
// sidebands. Sidebands: one window of +-0.4 gap around each, falling back to
// a joint fit of all five dips when such a window cannot hold the expected
// width. force_joint always takes the joint path.
Measurement measure(const CptOptions& o, Resonance which, const GridPolicy& grid, bool force_joint,
                    Spectrum* spectrum_out) {
  const double w = expected_fwhm(o);
  const double center = o.system.zeeman_mhz;
  const double gap = o.omega_m_mhz / std::numbers::sqrt2;
  const bool bare = o.omega_m_mhz == 0.0;
  if (bare && which == Resonance::FirstSideband) {
    throw InvalidArgument("sweep: the bare spectrum has no sidebands");
  }
  const double side_half = 0.4 * gap;
  const bool joint = !bare && (force_joint || (which == Resonance::FirstSideband &&
                                               2.0 * side_half < 3.0 * w));

  Measurement m;
  SweepPoint& p = m.point;
  try {
    if (joint) {
      const double half = std::numbers::sqrt2 * o.omega_m_mhz + grid.half_window_fwhm * w;
      const auto n = odd_count(2.0 * half, w / grid.points_per_fwhm, grid.max_points);
      const Spectrum spectrum = cpt_spectrum(o, linspace(center - half, center + half, n));
      if (spectrum_out) *spectrum_out = spectrum;
      m.fit = fit_cpt_resonances(spectrum, o.omega_m_mhz, center, w);
      fill(p, m.fit, 2);
      if (which == Resonance::FirstSideband) {
        const auto a = analysis::fwhm_of(m.fit, 1), b = analysis::fwhm_of(m.fit, 3);
        p.fwhm_mhz = 0.5 * (a.value + b.value);
        p.fwhm_error_mhz = 0.5 * std::hypot(a.error, b.error);
      }
    } else if (which == Resonance::Central) {
      double half = grid.half_window_fwhm * w;
      if (!bare) half = std::min(half, 0.5 * gap);
      m.fit = fit_window(o, center, half, std::min(w, half / 2.0), grid, spectrum_out);
      fill(p, m.fit, 0);
    } else {
      SweepPoint lo, hi;
      const double ws = std::min(w, side_half / 2.0);
      fill(lo, fit_window(o, center - gap, side_half, ws, grid, nullptr), 0);
      m.fit = fit_window(o, center + gap, side_half, ws, grid, spectrum_out);
      fill(hi, m.fit, 0);
      p.fwhm_mhz = 0.5 * (lo.fwhm_mhz + hi.fwhm_mhz);
      p.fwhm_error_mhz = 0.5 * std::hypot(lo.fwhm_error_mhz, hi.fwhm_error_mhz);
      p.center_mhz = 0.5 * (hi.center_mhz - lo.center_mhz);
      p.iterations = lo.iterations + hi.iterations;
      p.residual_rms = std::max(lo.residual_rms, hi.residual_rms);
    }
    p.ok = true;
    p.status = "ok";
    if (joint && which == Resonance::FirstSideband && gap < 0.5 * (p.fwhm_mhz + w)) {
      p.ok = false;
      p.status = "overlapping";
    }
  } catch (const Error& e) {
    p.ok = false;
    p.status = std::string("fit_failed: ") + e.what();
  }
  return m;
}

}  // namespace

double expected_fwhm(const CptOptions& o) {
  double w = analytic_cpt_fwhm(o.omega_0_mhz, o.rates.dipole_decoherence_mhz(),
                               o.rates.spin_dephasing_mhz);
  if (o.mode == SpectrumMode::Pulsed) w += 0.9 / o.schedule.duration_us;
  if (o.omega_m_mhz == 0.0) w = std::hypot(w, kGaussFwhm * 2.0 * o.noise.sigma_n_mhz);
  return std::max(w, 1e-3);
}

SweepPoint measure_resonance(const CptOptions& options, Resonance which, const GridPolicy& grid,
                             Spectrum* spectrum_out) {
  return measure(options, which, grid, false, spectrum_out).point;
}

SweepResult linewidth_vs_power(const CptOptions& base, std::span<const double> powers,
                               bool dressed, double calibration, const GridPolicy& grid) {
  if (powers.empty()) throw InvalidArgument("sweep: empty power list");
  SweepResult r;
  r.variable = "power_nw";
  r.metadata["resonance"] = "central";
  r.metadata["dressed"] = dressed ? "true" : "false";
  for (double p : powers) {
    CptOptions o = base;
    o.omega_0_mhz = power_to_rabi(p, calibration);
    if (!dressed) o.omega_m_mhz = 0.0;
    SweepPoint pt = measure(o, Resonance::Central, grid, false, nullptr).point;
    pt.value = p;
    r.points.push_back(pt);
  }
  return r;
}

SweepResult linewidth_vs_omega_m(const CptOptions& base, std::span<const double> omegas,
                                 double power, Resonance which, double calibration,
                                 const GridPolicy& grid) {
  if (omegas.empty()) throw InvalidArgument("sweep: empty omega_m list");
  SweepResult r;
  r.variable = "omega_m_mhz";
  r.metadata["resonance"] = which == Resonance::Central ? "central" : "first_sideband";
  r.metadata["power_nw"] = std::to_string(power);
  for (double om : omegas) {
    if (!(om > 0.0)) throw InvalidArgument("sweep: omega_m must be > 0");
    CptOptions o = base;
    o.omega_m_mhz = om;
    o.omega_0_mhz = power_to_rabi(power, calibration);
    SweepPoint pt = measure(o, which, grid, false, nullptr).point;
    pt.value = om;
    r.points.push_back(pt);
  }
  return r;
}

SweepResult splitting_vs_omega_m(const CptOptions& base, std::span<const double> omegas,
                                 double power, double calibration, const GridPolicy& grid) {
  if (omegas.empty()) throw InvalidArgument("sweep: empty omega_m list");
  SweepResult r;
  r.variable = "omega_m_mhz";
  r.metadata["resonance"] = "splitting";
  r.metadata["power_nw"] = std::to_string(power);
  for (double om : omegas) {
    if (!(om > 0.0)) throw InvalidArgument("sweep: omega_m must be > 0");
    CptOptions o = base;
    o.omega_m_mhz = om;
    o.omega_0_mhz = power_to_rabi(power, calibration);
    Measurement m = measure(o, Resonance::FirstSideband, grid, true, nullptr);
    SweepPoint& pt = m.point;
    pt.value = om;
    if (pt.status == "ok" || pt.status == "overlapping") {
      const auto& peaks = m.fit.model.peaks;
      pt.splitting_mhz = 0.5 * (peaks[3].center - peaks[1].center);
      const auto& c = m.fit.covariance;
      const Eigen::Index i1 = 1 + 3 * 1, i3 = 1 + 3 * 3;
      pt.splitting_error_mhz = 0.5 * std::sqrt(std::max(0.0, c(i1, i1) + c(i3, i3) - 2.0 * c(i1, i3)));
      if (pt.status == "overlapping") pt.status = "unresolved";
    }
    r.points.push_back(pt);
  }
  return r;
}

double calibrate_bare_sigma(const CptOptions& base, double target, double power, double calibration,
                            const GridPolicy& grid) {
  CptOptions o = base;
  o.omega_m_mhz = 0.0;
  o.omega_0_mhz = power_to_rabi(power, calibration);
  o.mode = SpectrumMode::Steady;
  o.initial.reset();
  auto fwhm_of = [&](double sigma) {
    CptOptions trial = o;
    trial.noise = noise::NoiseModel::static_gaussian(sigma, base.noise.seed,
                                                    std::max(1, base.noise.n_samples));
    if (sigma == 0.0) trial.noise = noise::NoiseModel::none();
    SweepPoint p = measure_resonance(trial, Resonance::Central, grid);
    if (!p.ok) throw NumericalError("calibrate_bare_sigma: " + p.status);
    return p.fwhm_mhz;
  };
  return noise::calibrate_sigma(target, fwhm_of);
}

}  // namespace nvdress::experiments
