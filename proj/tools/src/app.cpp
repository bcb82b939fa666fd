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


#include "nvdress/cli/app.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "nvdress/analysis/lorentzian.hpp"
#include "nvdress/cli/config.hpp"
#include "nvdress/experiments/cpt.hpp"
#include "nvdress/experiments/rabi.hpp"
#include "nvdress/experiments/sweeps.hpp"
#include "nvdress/nv/dressed.hpp"

namespace nvdress::cli {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;
namespace ex = experiments;

struct Flags {
  std::string config_path;
  std::string preset;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::string out_dir;
  std::string input;
  std::optional<int> peaks;
};

RunConfig resolve(const Flags& f) {
  if (!f.config_path.empty() && !f.preset.empty()) {
    throw ConfigError("use --config or --preset, not both");
  }
  RunConfig c;
  if (!f.config_path.empty()) {
    c = load_config(f.config_path);
  } else if (!f.preset.empty()) {
    const auto& presets = builtin_presets();
    const auto it = presets.find(f.preset);
    if (it == presets.end()) throw ConfigError("unknown preset '" + f.preset + "'");
    c = parse_config(it->second, "preset:" + f.preset);
  }
  if (f.seed) c.noise.seed = *f.seed;
  if (f.workers) c.workers = *f.workers;
  if (!f.out_dir.empty()) c.output.dir = f.out_dir;
  c.validate();
  return c;
}

fs::path output_path(const RunConfig& c, const std::string& suffix) {
  const fs::path dir(c.output.dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  return dir / (c.output.name + suffix);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Replaces sigma_N by the value that reproduces the requested bare width.
std::optional<double> apply_calibration(const RunConfig& c, ex::CptOptions& o) {
  if (!c.noise.calibrate_bare_fwhm_mhz) return std::nullopt;
  ex::CptOptions base = o;
  base.noise.spin = noise::SpinNoise::StaticGaussian;
  const double sigma = ex::calibrate_bare_sigma(base, *c.noise.calibrate_bare_fwhm_mhz,
                                                c.noise.calibration_power_nw, c.calibration_mhz);
  if (o.noise.spin == noise::SpinNoise::None) o.noise.spin = noise::SpinNoise::StaticGaussian;
  o.noise.sigma_n_mhz = sigma;
  return sigma;
}

json run_header(const RunConfig& c, double runtime, std::optional<double> calibrated_sigma) {
  json j;
  j["config"] = to_json(c);
  j["seed"] = c.noise.seed;
  j["runtime_s"] = runtime;
  j["calibrated_sigma_n_mhz"] = calibrated_sigma ? json(*calibrated_sigma) : json(nullptr);
  return j;
}

json predictions(const RunConfig& c) {
  json blocks = json::array();
  const auto base = nv::cpt_resonance_positions(c.omega_m_mhz, c.system.zeeman_mhz);
  if (!c.system.hyperfine) {
    blocks.push_back({{"m_n", 0}, {"positions_mhz", base}});
  } else {
    for (Eigen::Index b = 0; b < c.system.block_count(); ++b) {
      // The two-photon resonance shifts by twice the |+> level shift.
      const double shift = 2.0 * c.system.hyperfine_shift_mhz(b);
      const auto pos = nv::cpt_resonance_positions(c.omega_m_mhz, c.system.zeeman_mhz + shift);
      blocks.push_back({{"m_n", nv::SystemConfig::kNuclearProjections[b]}, {"positions_mhz", pos}});
    }
  }
  return {{"resonances", blocks},
          {"omega_0_mhz", c.optical_rabi_mhz()},
          {"lambda_fwhm_mhz", ex::analytic_cpt_fwhm(c.optical_rabi_mhz(),
                                                    c.rates.dipole_decoherence_mhz(),
                                                    c.rates.spin_dephasing_mhz)}};
}

int cmd_spectrum(const RunConfig& c, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  ex::CptOptions o = c.cpt_options();
  const auto sigma = apply_calibration(c, o);
  const auto grid = c.grid();
  const Spectrum s = ex::cpt_spectrum(o, grid);

  const fs::path csv = output_path(c, ".csv");
  write_spectrum_csv(csv.string(), s);
  json j = run_header(c, seconds_since(start), sigma);
  j["predictions"] = predictions(c);
  j["metadata"] = s.metadata;
  j["points"] = s.size();
  const fs::path sidecar = output_path(c, ".json");
  write_text(sidecar, j.dump(2) + "\n");
  out << "wrote " << csv.string() << " and " << sidecar.string() << "\n";
  return kExitOk;
}

json point_json(const std::string& series, const ex::SweepPoint& p) {
  return {{"series", series},          {"value", p.value},
          {"fwhm_mhz", p.fwhm_mhz},    {"fwhm_error_mhz", p.fwhm_error_mhz},
          {"center_mhz", p.center_mhz}, {"splitting_mhz", p.splitting_mhz},
          {"splitting_error_mhz", p.splitting_error_mhz},
          {"ok", p.ok},                {"status", p.status},
          {"iterations", p.iterations}, {"residual_rms", p.residual_rms}};
}

int cmd_sweep(const RunConfig& c, std::ostream& out) {
  if (c.sweep.values.empty()) throw ConfigError("sweep: empty grid");
  const auto start = std::chrono::steady_clock::now();
  ex::CptOptions base = c.cpt_options();
  const auto sigma = apply_calibration(c, base);
  const auto policy = c.grid_policy();

  std::vector<std::pair<std::string, ex::SweepResult>> series;
  if (c.sweep.kind == "power") {
    for (const auto& state : c.sweep.states) {
      series.emplace_back(state, ex::linewidth_vs_power(base, c.sweep.values, state == "dressed",
                                                        c.calibration_mhz, policy));
    }
  } else if (c.sweep.kind == "omega_m") {
    for (const auto& r : c.sweep.resonances) {
      const auto which = r == "central" ? ex::Resonance::Central : ex::Resonance::FirstSideband;
      series.emplace_back(r, ex::linewidth_vs_omega_m(base, c.sweep.values, c.sweep.power_nw,
                                                      which, c.calibration_mhz, policy));
    }
  } else {
    series.emplace_back("first_sideband",
                        ex::splitting_vs_omega_m(base, c.sweep.values, c.sweep.power_nw,
                                                 c.calibration_mhz, policy));
  }

  std::ostringstream csv;
  csv << "sweep_value,series,fwhm_mhz,fwhm_err,center_mhz,splitting_mhz,splitting_err,status\n";
  json points = json::array();
  json metadata = json::object();
  for (const auto& [name, result] : series) {
    metadata[name] = result.metadata;
    for (const auto& p : result.points) {
      csv << format_number(p.value) << ',' << name << ',' << format_number(p.fwhm_mhz) << ','
          << format_number(p.fwhm_error_mhz) << ',' << format_number(p.center_mhz) << ','
          << format_number(p.splitting_mhz) << ',' << format_number(p.splitting_error_mhz) << ','
          << '"' << p.status << '"' << '\n';
      points.push_back(point_json(name, p));
    }
  }
  const fs::path csv_path = output_path(c, ".csv");
  write_text(csv_path, csv.str());
  json j = run_header(c, seconds_since(start), sigma);
  j["variable"] = series.front().second.variable;
  j["points"] = points;
  j["metadata"] = metadata;
  const fs::path sidecar = output_path(c, ".json");
  write_text(sidecar, j.dump(2) + "\n");
  out << "wrote " << csv_path.string() << " and " << sidecar.string() << "\n";
  return kExitOk;
}

int cmd_fit(const RunConfig& c, const Flags& f, std::ostream& out) {
  if (f.input.empty()) throw ConfigError("fit: an input CSV is required");
  const int n_peaks = f.peaks.value_or(c.fit.n_peaks);
  if (n_peaks < 1) throw ConfigError("fit: n_peaks must be >= 1");
  const Spectrum s = read_spectrum_csv(f.input);

  analysis::LorentzianModel init;
  if (!c.fit.centers.empty()) {
    if (static_cast<int>(c.fit.centers.size()) != n_peaks) {
      throw ConfigError("fit: centers must list n_peaks values");
    }
    init = analysis::seed_at(s, c.fit.centers, c.fit.fwhm_mhz);
  } else {
    init = analysis::seed_from_minima(s, static_cast<std::size_t>(n_peaks));
    if (init.peaks.size() != static_cast<std::size_t>(n_peaks)) {
      throw NumericalError("fit: found only " + std::to_string(init.peaks.size()) + " dips");
    }
  }
  analysis::FitOptions options;
  options.baseline_order = c.fit.baseline_order;
  options.shared_width = c.fit.shared_width;
  const auto fit = analysis::fit_lorentzians(s, static_cast<std::size_t>(n_peaks), init, options);

  json peaks = json::array();
  for (std::size_t k = 0; k < fit.model.peaks.size(); ++k) {
    const auto& p = fit.model.peaks[k];
    const Eigen::Index i = 1 + 3 * static_cast<Eigen::Index>(k);
    auto err = [&](Eigen::Index m) { return std::sqrt(std::max(0.0, fit.covariance(m, m))); };
    peaks.push_back({{"center_mhz", p.center},
                     {"center_error_mhz", err(i)},
                     {"fwhm_mhz", p.fwhm},
                     {"fwhm_error_mhz", err(i + 1)},
                     {"amplitude", p.amplitude},
                     {"amplitude_error", err(i + 2)},
                     {"area", p.area()},
                     {"sign", p.sign == analysis::PeakSign::Dip ? "dip" : "peak"}});
  }
  json cov = json::array();
  for (Eigen::Index r = 0; r < fit.covariance.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index k = 0; k < fit.covariance.cols(); ++k) row.push_back(fit.covariance(r, k));
    cov.push_back(row);
  }
  json j = {{"input", f.input},
            {"peaks", peaks},
            {"baseline", fit.model.baseline},
            {"slope", fit.model.slope},
            {"curvature", fit.model.curvature},
            {"covariance", cov},
            {"residual_rms", fit.residual_rms},
            {"converged", fit.converged},
            {"iterations", fit.iterations},
            {"message", fit.message}};
  const fs::path path = output_path(c, "_fit.json");
  write_text(path, j.dump(2) + "\n");
  out << j.dump(2) << "\n";
  return fit.converged ? kExitOk : kExitNumerical;
}

int cmd_oracle(const RunConfig& c, std::ostream& out) {
  const double gamma = c.rates.dipole_decoherence_mhz();
  if (!(gamma > 0.0)) throw ConfigError("oracle: optical decoherence gamma must be > 0");
  const double omega0 = c.optical_rabi_mhz();
  const double gamma_s = c.rates.spin_dephasing_mhz;
  const double offset = c.scan.relative ? c.system.zeeman_mhz : 0.0;
  json rows = json::array();
  for (double d : c.grid()) {
    const auto rho = ex::analytic_cpt(d - offset, 0.0, omega0, gamma, gamma_s, 0.5, 0.5);
    rows.push_back({{"delta_mhz", d - offset},
                    {"re", rho.real()},
                    {"im", rho.imag()},
                    {"abs2", std::norm(rho)}});
  }
  json j = {{"omega_0_mhz", omega0},
            {"gamma_mhz", gamma},
            {"gamma_s_mhz", gamma_s},
            {"fwhm_mhz", ex::analytic_cpt_fwhm(omega0, gamma, gamma_s)},
            {"coherence", rows}};
  out << j.dump(2) << "\n";
  return kExitOk;
}

nv::Level level_named(const std::string& name) {
  if (name == "zero") return nv::Level::Zero;
  if (name == "plus") return nv::Level::Plus;
  if (name == "minus") return nv::Level::Minus;
  return nv::Level::Excited;
}

int cmd_rabi(const RunConfig& c, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  nv::DriveField drive;
  drive.kind = c.rabi.kind == "optical" ? nv::DriveKind::Optical : nv::DriveKind::Microwave;
  drive.lower = level_named(c.rabi.lower);
  drive.upper = level_named(c.rabi.upper);
  drive.rabi_mhz = c.rabi.rabi_mhz;
  drive.detuning_mhz = c.rabi.detuning_mhz;
  const auto trace =
      ex::rabi_trace(c.system, c.rates, drive, c.rabi.duration_us, c.rabi.step_us);

  std::ostringstream csv;
  csv << "time_us,population\n";
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    csv << format_number(trace.times[i]) << ',' << format_number(trace.population[i]) << '\n';
  }
  const fs::path csv_path = output_path(c, ".csv");
  write_text(csv_path, csv.str());
  json j = run_header(c, seconds_since(start), std::nullopt);
  j["rabi_mhz"] = trace.rabi_mhz;
  j["expected_rabi_mhz"] = std::hypot(c.rabi.rabi_mhz, c.rabi.detuning_mhz);
  const fs::path sidecar = output_path(c, ".json");
  write_text(sidecar, j.dump(2) + "\n");
  out << "rabi frequency " << format_number(trace.rabi_mhz) << " MHz\n";
  return kExitOk;
}

}  // namespace

std::string format_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_spectrum_csv(const std::string& path, const Spectrum& s) {
  std::ostringstream csv;
  csv << "detuning_mhz,signal,stderr\n";
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double se = s.has_standard_error() ? s.standard_error[i] : 0.0;
    csv << format_number(s.detunings[i]) << ',' << format_number(s.signal[i]) << ','
        << format_number(se) << '\n';
  }
  write_text(path, csv.str());
}

Spectrum read_spectrum_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::string line;
  if (!std::getline(in, line) || line != "detuning_mhz,signal,stderr") {
    throw ConfigError(path + ":1: expected header detuning_mhz,signal,stderr");
  }
  Spectrum s;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    double v[3];
    std::istringstream fields(line);
    std::string field;
    int n = 0;
    while (std::getline(fields, field, ',')) {
      if (n == 3) throw ConfigError(path + ":" + std::to_string(row) + ": too many columns");
      std::size_t used = 0;
      try {
        v[n] = std::stod(field, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != field.size() || field.empty() || !std::isfinite(v[n])) {
        throw ConfigError(path + ":" + std::to_string(row) + ": bad number '" + field + "'");
      }
      ++n;
    }
    if (n != 3) throw ConfigError(path + ":" + std::to_string(row) + ": expected 3 columns");
    s.detunings.push_back(v[0]);
    s.signal.push_back(v[1]);
    s.standard_error.push_back(v[2]);
  }
  if (s.size() == 0) throw ConfigError(path + ": no data rows");
  try {
    s.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return s;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dressed-spin CPT simulations of an NV center", "nvdress"};
  app.require_subcommand(1);
  app.fallthrough();
  Flags f;
  app.add_option("--config", f.config_path, "Run configuration (YAML)");
  app.add_option("--preset", f.preset, "Built-in configuration by name");
  app.add_option("--seed", f.seed, "Noise seed override");
  app.add_option("--workers", f.workers, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--out", f.out_dir, "Output directory override");

  auto* spectrum = app.add_subcommand("spectrum", "CPT emission spectrum (CSV + JSON)");
  auto* sweep = app.add_subcommand("sweep", "Linewidth or splitting sweep (CSV + JSON)");
  auto* fit = app.add_subcommand("fit", "Lorentzian fit of a spectrum CSV (JSON)");
  fit->add_option("input", f.input, "Spectrum CSV")->required();
  fit->add_option("--peaks", f.peaks, "Number of Lorentzian dips");
  auto* oracle = app.add_subcommand("oracle", "Closed-form Lambda-system coherence (JSON)");
  auto* rabi = app.add_subcommand("rabi", "Rabi oscillation of a single drive (CSV + JSON)");
  auto* presets = app.add_subcommand("presets", "List built-in presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*presets) {
      for (const auto& [name, text] : builtin_presets()) out << name << "\n";
      return kExitOk;
    }
    const RunConfig c = resolve(f);
    if (*spectrum) return cmd_spectrum(c, out);
    if (*sweep) return cmd_sweep(c, out);
    if (*fit) return cmd_fit(c, f, out);
    if (*oracle) return cmd_oracle(c, out);
    if (*rabi) return cmd_rabi(c, out);
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitConfig;
}

}  // namespace nvdress::cli
