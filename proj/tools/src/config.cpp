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


#include "nvdress/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace nvdress::cli {
namespace {

std::string where(const std::string& source, const YAML::Mark& mark) {
  std::ostringstream s;
  s << source << ':' << mark.line + 1 << ':' << mark.column + 1;
  return s.str();
}

// A mapping whose keys must all be consumed; leftover keys are reported.
class Section {
 public:
  Section(const YAML::Node& node, std::string name, const std::string& source)
      : node_(node), name_(std::move(name)), source_(source) {
    if (node_ && !node_.IsNull() && !node_.IsMap()) fail(node_, name_ + " must be a mapping");
  }

  [[noreturn]] void fail(const YAML::Node& at, const std::string& msg) const {
    throw ConfigError(where(source_, at.Mark()) + ": " + msg);
  }
  [[noreturn]] void fail(const std::string& msg) const { fail(node_, msg); }

  bool present() const { return node_ && node_.IsMap(); }

  template <typename T>
  void get(const char* key, T& out) {
    used_.insert(key);
    if (!present()) return;
    const YAML::Node v = node_[key];
    if (!v || v.IsNull()) return;
    out = convert<T>(v, key);
  }

  template <typename T>
  void get(const char* key, std::optional<T>& out) {
    used_.insert(key);
    if (!present()) return;
    const YAML::Node v = node_[key];
    if (!v) return;
    if (v.IsNull()) {
      out.reset();
      return;
    }
    out = convert<T>(v, key);
  }

  template <typename T>
  void get(const char* key, std::vector<T>& out) {
    used_.insert(key);
    if (!present()) return;
    const YAML::Node v = node_[key];
    if (!v || v.IsNull()) return;
    if (!v.IsSequence()) fail(v, qualified(key) + " must be a list");
    out.clear();
    for (const auto& item : v) out.push_back(convert<T>(item, key));
  }

  YAML::Node child(const char* key) {
    used_.insert(key);
    return present() ? node_[key] : YAML::Node();
  }

  const YAML::Node& node() const { return node_; }

  void finish() const {
    if (!present()) return;
    for (const auto& kv : node_) {
      const auto key = kv.first.as<std::string>();
      if (!used_.count(key)) fail(kv.first, "unknown key '" + qualified(key) + "'");
    }
  }

  std::string qualified(const std::string& key) const {
    return name_.empty() ? key : name_ + "." + key;
  }

 private:
  template <typename T>
  T convert(const YAML::Node& v, const std::string& key) const {
    if (!v.IsScalar()) fail(v, qualified(key) + " must be a scalar");
    try {
      T value = v.as<T>();
      if constexpr (std::is_floating_point_v<T>) {
        if (!std::isfinite(value)) fail(v, qualified(key) + " must be finite");
      }
      return value;
    } catch (const YAML::BadConversion&) {
      fail(v, "bad value '" + v.Scalar() + "' for " + qualified(key));
    }
  }

  YAML::Node node_;
  std::string name_;
  const std::string& source_;
  std::set<std::string> used_;
};

template <typename Enum, std::size_t N>
Enum parse_enum(Section& s, const char* key, Enum current,
                const std::array<std::pair<const char*, Enum>, N>& names) {
  std::string text;
  s.get(key, text);
  if (text.empty()) return current;
  for (const auto& [name, value] : names) {
    if (text == name) return value;
  }
  std::string allowed;
  for (const auto& [name, value] : names) allowed += std::string(allowed.empty() ? "" : ", ") + name;
  s.fail(s.child(key), "bad value '" + text + "' for " + s.qualified(key) + " (expected " + allowed + ")");
}

template <typename Enum, std::size_t N>
const char* enum_name(Enum value, const std::array<std::pair<const char*, Enum>, N>& names) {
  for (const auto& [name, v] : names) {
    if (v == value) return name;
  }
  return "?";
}

constexpr std::array<std::pair<const char*, nv::LevelSet>, 3> kLevelSets{{
    {"spin_only", nv::LevelSet::SpinOnly},
    {"full", nv::LevelSet::Full},
    {"lambda", nv::LevelSet::Lambda},
}};
constexpr std::array<std::pair<const char*, experiments::SpectrumMode>, 2> kModes{{
    {"steady", experiments::SpectrumMode::Steady},
    {"pulsed", experiments::SpectrumMode::Pulsed},
}};
constexpr std::array<std::pair<const char*, experiments::InitialState>, 3> kInitial{{
    {"zero", experiments::InitialState::Zero},
    {"plus", experiments::InitialState::Plus},
    {"spin_mixture", experiments::InitialState::SpinMixture},
}};
constexpr std::array<std::pair<const char*, noise::SpinNoise>, 3> kSpinNoise{{
    {"none", noise::SpinNoise::None},
    {"static_gaussian", noise::SpinNoise::StaticGaussian},
    {"ornstein_uhlenbeck", noise::SpinNoise::OrnsteinUhlenbeck},
}};

// Runs a validator and attaches the section position to its message.
template <typename F>
void checked(const Section& s, F&& validate) {
  try {
    validate();
  } catch (const InvalidArgument& e) {
    s.fail(e.what());
  }
}

void check_one_of(const Section& s, const char* key, const std::string& value,
                  std::initializer_list<const char*> allowed) {
  for (const char* a : allowed) {
    if (value == a) return;
  }
  std::string list;
  for (const char* a : allowed) list += std::string(list.empty() ? "" : ", ") + a;
  s.fail("bad value '" + value + "' for " + s.qualified(key) + " (expected " + list + ")");
}

}  // namespace

double RunConfig::optical_rabi_mhz() const {
  if (omega_0_mhz) return *omega_0_mhz;
  return experiments::power_to_rabi(power_nw.value_or(1.0), calibration_mhz);
}

noise::NoiseModel RunConfig::noise_model() const {
  noise::NoiseModel m;
  m.spin = noise::SpinNoise::None;
  for (const auto& [name, value] : kSpinNoise) {
    if (noise.variant == name) m.spin = value;
  }
  m.sigma_n_mhz = m.spin == noise::SpinNoise::None ? 0.0 : noise.sigma_n_mhz;
  m.correlation_time_us = noise.correlation_time_us;
  m.sigma_opt_mhz = noise.sigma_opt_mhz;
  m.seed = noise.seed;
  m.n_samples = noise.n_samples;
  return m;
}

experiments::CptOptions RunConfig::cpt_options() const {
  experiments::CptOptions o;
  o.system = system;
  o.rates = rates;
  o.omega_m_mhz = omega_m_mhz;
  o.omega_0_mhz = optical_rabi_mhz();
  o.loop_phase_rad = loop_phase_rad;
  o.loop_phase_points = loop_phase_points;
  o.mode = mode;
  o.schedule = schedule;
  o.initial = initial;
  o.noise = noise_model();
  o.workers = workers;
  return o;
}

std::vector<double> RunConfig::grid() const {
  const double offset = scan.relative ? system.zeeman_mhz : 0.0;
  if (scan.points == 1) return {offset + 0.5 * (scan.start_mhz + scan.stop_mhz)};
  return experiments::linspace(offset + scan.start_mhz, offset + scan.stop_mhz,
                               static_cast<std::size_t>(scan.points));
}

experiments::GridPolicy RunConfig::grid_policy() const {
  experiments::GridPolicy g;
  g.points_per_fwhm = sweep.points_per_fwhm;
  g.half_window_fwhm = sweep.half_window_fwhm;
  return g;
}

void RunConfig::validate() const {
  cpt_options().validate();
  if (power_nw && omega_0_mhz) throw ConfigError("drives: give power_nw or omega_0_mhz, not both");
  if (power_nw && !(*power_nw >= 0.0)) throw ConfigError("drives: power_nw must be >= 0");
  if (!(calibration_mhz > 0.0)) throw ConfigError("drives: calibration_mhz must be > 0");
  if (scan.points < 1) throw ConfigError("scan: empty grid");
  if (scan.points > 1 && !(scan.stop_mhz > scan.start_mhz)) {
    throw ConfigError("scan: stop_mhz must exceed start_mhz");
  }
  if (workers < 1) throw ConfigError("workers must be >= 1");
  if (fit.n_peaks < 1) throw ConfigError("fit: n_peaks must be >= 1");
  if (!fit.centers.empty() && static_cast<int>(fit.centers.size()) != fit.n_peaks) {
    throw ConfigError("fit: centers must list n_peaks values");
  }
  if (!(fit.fwhm_mhz > 0.0)) throw ConfigError("fit: fwhm_mhz must be > 0");
  if (fit.baseline_order < 0 || fit.baseline_order > 2) {
    throw ConfigError("fit: baseline_order must be 0, 1 or 2");
  }
  if (!(sweep.points_per_fwhm > 0.0) || !(sweep.half_window_fwhm > 0.0)) {
    throw ConfigError("sweep: grid policy values must be > 0");
  }
  if (noise.calibrate_bare_fwhm_mhz && !(*noise.calibrate_bare_fwhm_mhz > 0.0)) {
    throw ConfigError("noise: calibrate_bare_fwhm_mhz must be > 0");
  }
  if (output.name.empty() || output.name.find('/') != std::string::npos) {
    throw ConfigError("output: name must be a plain file stem");
  }
}

RunConfig parse_config(const std::string& text, const std::string& source) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(where(source, e.mark) + ": " + e.msg);
  }
  RunConfig c;
  Section top(root, "", source);
  if (!root || root.IsNull()) return c;
  if (!root.IsMap()) top.fail("configuration must be a mapping");

  {
    Section s(top.child("system"), "system", source);
    s.get("zeeman_mhz", c.system.zeeman_mhz);
    c.system.levels = parse_enum(s, "levels", c.system.levels, kLevelSets);
    s.get("hyperfine", c.system.hyperfine);
    s.get("hyperfine_mhz", c.system.hyperfine_mhz);
    s.finish();
    checked(s, [&] { c.system.validate(); });
  }
  {
    Section s(top.child("rates"), "rates", source);
    s.get("excited_decay_mhz", c.rates.excited_decay_mhz);
    s.get("branch_plus", c.rates.branch_plus);
    s.get("branch_minus", c.rates.branch_minus);
    s.get("branch_zero", c.rates.branch_zero);
    s.get("optical_dephasing_mhz", c.rates.optical_dephasing_mhz);
    s.get("spin_dephasing_mhz", c.rates.spin_dephasing_mhz);
    s.finish();
    checked(s, [&] { c.rates.validate(); });
  }
  {
    Section s(top.child("drives"), "drives", source);
    s.get("omega_m_mhz", c.omega_m_mhz);
    s.get("power_nw", c.power_nw);
    s.get("omega_0_mhz", c.omega_0_mhz);
    s.get("calibration_mhz", c.calibration_mhz);
    s.get("loop_phase_rad", c.loop_phase_rad);
    s.get("loop_phase_points", c.loop_phase_points);
    s.finish();
    if (c.power_nw && c.omega_0_mhz) s.fail("give drives.power_nw or drives.omega_0_mhz, not both");
    if (!(c.omega_m_mhz >= 0.0)) s.fail("drives.omega_m_mhz must be >= 0");
    if (c.power_nw && !(*c.power_nw >= 0.0)) s.fail("drives.power_nw must be >= 0");
    if (c.omega_0_mhz && !(*c.omega_0_mhz >= 0.0)) s.fail("drives.omega_0_mhz must be >= 0");
    if (!(c.calibration_mhz > 0.0)) s.fail("drives.calibration_mhz must be > 0");
    if (c.loop_phase_points < 1) s.fail("drives.loop_phase_points must be >= 1");
  }
  {
    Section s(top.child("noise"), "noise", source);
    s.get("variant", c.noise.variant);
    s.get("sigma_n_mhz", c.noise.sigma_n_mhz);
    s.get("correlation_time_us", c.noise.correlation_time_us);
    s.get("sigma_opt_mhz", c.noise.sigma_opt_mhz);
    s.get("seed", c.noise.seed);
    s.get("n_samples", c.noise.n_samples);
    s.get("calibrate_bare_fwhm_mhz", c.noise.calibrate_bare_fwhm_mhz);
    s.get("calibration_power_nw", c.noise.calibration_power_nw);
    s.finish();
    check_one_of(s, "variant", c.noise.variant, {"none", "static_gaussian", "ornstein_uhlenbeck"});
    checked(s, [&] { c.noise_model().validate(); });
    if (c.noise.calibrate_bare_fwhm_mhz && !(*c.noise.calibrate_bare_fwhm_mhz > 0.0)) {
      s.fail("noise.calibrate_bare_fwhm_mhz must be > 0");
    }
    if (!(c.noise.calibration_power_nw > 0.0)) s.fail("noise.calibration_power_nw must be > 0");
  }
  {
    Section s(top.child("schedule"), "schedule", source);
    s.get("duration_us", c.schedule.duration_us);
    s.get("step_us", c.schedule.step_us);
    s.get("window_start_us", c.schedule.window_start_us);
    s.get("window_end_us", c.schedule.window_end_us);
    s.finish();
    checked(s, [&] { c.schedule.validate(); });
  }
  {
    c.mode = parse_enum(top, "mode", c.mode, kModes);
    std::string initial;
    top.get("initial", initial);
    if (!initial.empty() && initial != "auto") {
      c.initial = parse_enum(top, "initial", experiments::InitialState::Zero, kInitial);
    }
    top.get("workers", c.workers);
    if (c.workers < 1) top.fail(top.child("workers"), "workers must be >= 1");
  }
  {
    Section s(top.child("scan"), "scan", source);
    s.get("start_mhz", c.scan.start_mhz);
    s.get("stop_mhz", c.scan.stop_mhz);
    s.get("points", c.scan.points);
    s.get("relative", c.scan.relative);
    s.finish();
    if (c.scan.points < 1) s.fail("scan: empty grid");
    if (c.scan.points > 1 && !(c.scan.stop_mhz > c.scan.start_mhz)) {
      s.fail("scan.stop_mhz must exceed scan.start_mhz");
    }
  }
  {
    Section s(top.child("sweep"), "sweep", source);
    s.get("kind", c.sweep.kind);
    s.get("values", c.sweep.values);
    s.get("resonances", c.sweep.resonances);
    s.get("states", c.sweep.states);
    s.get("power_nw", c.sweep.power_nw);
    s.get("points_per_fwhm", c.sweep.points_per_fwhm);
    s.get("half_window_fwhm", c.sweep.half_window_fwhm);
    s.finish();
    check_one_of(s, "kind", c.sweep.kind, {"power", "omega_m", "splitting"});
    for (const auto& r : c.sweep.resonances) {
      check_one_of(s, "resonances", r, {"central", "first_sideband"});
    }
    for (const auto& st : c.sweep.states) check_one_of(s, "states", st, {"dressed", "bare"});
    if (c.sweep.resonances.empty() || c.sweep.states.empty()) {
      s.fail("sweep.resonances and sweep.states must not be empty");
    }
    if (!(c.sweep.power_nw > 0.0)) s.fail("sweep.power_nw must be > 0");
  }
  {
    Section s(top.child("rabi"), "rabi", source);
    s.get("kind", c.rabi.kind);
    s.get("lower", c.rabi.lower);
    s.get("upper", c.rabi.upper);
    s.get("rabi_mhz", c.rabi.rabi_mhz);
    s.get("detuning_mhz", c.rabi.detuning_mhz);
    s.get("duration_us", c.rabi.duration_us);
    s.get("step_us", c.rabi.step_us);
    s.finish();
    check_one_of(s, "kind", c.rabi.kind, {"microwave", "optical"});
    check_one_of(s, "lower", c.rabi.lower, {"zero", "plus", "minus", "excited"});
    check_one_of(s, "upper", c.rabi.upper, {"zero", "plus", "minus", "excited"});
    if (!(c.rabi.step_us > 0.0) || !(c.rabi.duration_us > c.rabi.step_us)) {
      s.fail("rabi: need 0 < step_us < duration_us");
    }
  }
  {
    Section s(top.child("fit"), "fit", source);
    s.get("n_peaks", c.fit.n_peaks);
    s.get("centers", c.fit.centers);
    s.get("fwhm_mhz", c.fit.fwhm_mhz);
    s.get("baseline_order", c.fit.baseline_order);
    s.get("shared_width", c.fit.shared_width);
    s.finish();
    if (c.fit.n_peaks < 1) s.fail("fit.n_peaks must be >= 1");
  }
  {
    Section s(top.child("output"), "output", source);
    s.get("dir", c.output.dir);
    s.get("name", c.output.name);
    s.finish();
  }
  top.finish();
  try {
    c.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(source + ": " + e.what());
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path);
}

nlohmann::json to_json(const RunConfig& c) {
  using nlohmann::json;
  auto opt = [](const auto& v) { return v ? json(*v) : json(nullptr); };
  json j;
  j["system"] = {{"zeeman_mhz", c.system.zeeman_mhz},
                 {"levels", enum_name(c.system.levels, kLevelSets)},
                 {"hyperfine", c.system.hyperfine},
                 {"hyperfine_mhz", c.system.hyperfine_mhz}};
  j["rates"] = {{"excited_decay_mhz", c.rates.excited_decay_mhz},
                {"branch_plus", c.rates.branch_plus},
                {"branch_minus", c.rates.branch_minus},
                {"branch_zero", c.rates.branch_zero},
                {"optical_dephasing_mhz", c.rates.optical_dephasing_mhz},
                {"spin_dephasing_mhz", c.rates.spin_dephasing_mhz}};
  j["drives"] = {{"omega_m_mhz", c.omega_m_mhz},
                 {"power_nw", opt(c.power_nw)},
                 {"omega_0_mhz", opt(c.omega_0_mhz)},
                 {"calibration_mhz", c.calibration_mhz},
                 {"loop_phase_rad", opt(c.loop_phase_rad)},
                 {"loop_phase_points", c.loop_phase_points}};
  j["noise"] = {{"variant", c.noise.variant},
                {"sigma_n_mhz", c.noise.sigma_n_mhz},
                {"correlation_time_us", c.noise.correlation_time_us},
                {"sigma_opt_mhz", c.noise.sigma_opt_mhz},
                {"seed", c.noise.seed},
                {"n_samples", c.noise.n_samples},
                {"calibrate_bare_fwhm_mhz", opt(c.noise.calibrate_bare_fwhm_mhz)},
                {"calibration_power_nw", c.noise.calibration_power_nw}};
  j["schedule"] = {{"duration_us", c.schedule.duration_us},
                   {"step_us", c.schedule.step_us},
                   {"window_start_us", c.schedule.window_start_us},
                   {"window_end_us", c.schedule.window_end_us}};
  j["mode"] = enum_name(c.mode, kModes);
  j["initial"] = c.initial ? json(enum_name(*c.initial, kInitial)) : json("auto");
  j["scan"] = {{"start_mhz", c.scan.start_mhz},
               {"stop_mhz", c.scan.stop_mhz},
               {"points", c.scan.points},
               {"relative", c.scan.relative}};
  j["sweep"] = {{"kind", c.sweep.kind},
                {"values", c.sweep.values},
                {"resonances", c.sweep.resonances},
                {"states", c.sweep.states},
                {"power_nw", c.sweep.power_nw},
                {"points_per_fwhm", c.sweep.points_per_fwhm},
                {"half_window_fwhm", c.sweep.half_window_fwhm}};
  j["rabi"] = {{"kind", c.rabi.kind},
               {"lower", c.rabi.lower},
               {"upper", c.rabi.upper},
               {"rabi_mhz", c.rabi.rabi_mhz},
               {"detuning_mhz", c.rabi.detuning_mhz},
               {"duration_us", c.rabi.duration_us},
               {"step_us", c.rabi.step_us}};
  j["fit"] = {{"n_peaks", c.fit.n_peaks},
              {"centers", c.fit.centers},
              {"fwhm_mhz", c.fit.fwhm_mhz},
              {"baseline_order", c.fit.baseline_order},
              {"shared_width", c.fit.shared_width}};
  j["output"] = {{"dir", c.output.dir}, {"name", c.output.name}};
  j["workers"] = c.workers;
  return j;
}

}  // namespace nvdress::cli
