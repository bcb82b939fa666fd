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


#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "nvdress/cli/app.hpp"
#include "nvdress/cli/config.hpp"
#include "nvdress/nv/dressed.hpp"

namespace nvdress::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Result {
  int code;
  std::string out, err;
};

Result cli(std::vector<std::string> args) {
  args.insert(args.begin(), "nvdress");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    path_ = fs::temp_directory_path() /
            (std::string("nvdress_") + info->test_suite_name() + "_" + info->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  fs::path operator/(const std::string& name) const { return path_ / name; }
  std::string str() const { return path_.string(); }

 private:
  fs::path path_;
};

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

std::string error_of(const std::string& yaml) {
  try {
    parse_config(yaml);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

TEST(Config, Defaults) {
  const RunConfig c = parse_config("");
  EXPECT_DOUBLE_EQ(c.optical_rabi_mhz(), 0.74);
  EXPECT_EQ(c.mode, experiments::SpectrumMode::Steady);
  EXPECT_EQ(c.grid().size(), 201u);
  EXPECT_DOUBLE_EQ(c.grid().front(), 98.0);
}

TEST(Config, ReadsNestedSections) {
  const RunConfig c = parse_config(
      "system:\n  zeeman_mhz: 50\n  hyperfine: true\n"
      "drives:\n  omega_m_mhz: 0.83\n  power_nw: 4\n"
      "noise:\n  variant: ornstein_uhlenbeck\n  sigma_n_mhz: 0.1\n  seed: 99\n  n_samples: 3\n"
      "mode: pulsed\ninitial: plus\nfit:\n  n_peaks: 3\n  shared_width: true\n");
  EXPECT_DOUBLE_EQ(c.system.zeeman_mhz, 50.0);
  EXPECT_TRUE(c.system.hyperfine);
  EXPECT_DOUBLE_EQ(c.optical_rabi_mhz(), 1.48);
  EXPECT_EQ(c.noise_model().spin, noise::SpinNoise::OrnsteinUhlenbeck);
  EXPECT_EQ(c.noise_model().seed, 99u);
  EXPECT_EQ(*c.initial, experiments::InitialState::Plus);
  EXPECT_TRUE(c.fit.shared_width);
  EXPECT_FALSE(parse_config("").fit.shared_width);
}

TEST(Config, UnknownKeysCarryPosition) {
  EXPECT_EQ(error_of("drives:\n  omega_m_mhz: 1\n  omgea: 2\n"),
            "config:3:3: unknown key 'drives.omgea'");
  EXPECT_EQ(error_of("sistem:\n  zeeman_mhz: 1\n"), "config:1:1: unknown key 'sistem'");
}

TEST(Config, BadValuesCarryPosition) {
  EXPECT_NE(error_of("drives:\n  omega_m_mhz: abc\n").find("config:2:16: bad value 'abc'"),
            std::string::npos);
  EXPECT_NE(error_of("mode: sideways\n").find("expected steady, pulsed"), std::string::npos);
  EXPECT_NE(error_of("drives:\n  power_nw: 1\n  omega_0_mhz: 1\n").find("not both"),
            std::string::npos);
  EXPECT_NE(error_of("system:\n  zeeman_mhz: -1\n").find("config:2:3"), std::string::npos);
  EXPECT_NE(error_of("scan:\n  points: 0\n").find("empty grid"), std::string::npos);
  EXPECT_NE(error_of("fit:\n  n_peaks: 0\n").find("n_peaks"), std::string::npos);
  EXPECT_NE(error_of("a: [1,\n").find("config:"), std::string::npos);
}

TEST(Config, JsonEchoRoundTrips) {
  std::vector<RunConfig> configs;
  for (const auto& [name, text] : builtin_presets()) configs.push_back(parse_config(text, name));
  configs.push_back(parse_config("drives:\n  omega_0_mhz: 0.123456789012345\n  loop_phase_rad: 1.5\n"
                                 "noise:\n  calibrate_bare_fwhm_mhz: 0.75\n  seed: 18446744073709551615\n"
                                 "initial: spin_mixture\n"));
  for (const auto& c : configs) {
    const json echo = to_json(c);
    const RunConfig back = parse_config(echo.dump(), "echo");
    EXPECT_EQ(to_json(back), echo);
  }
}

TEST(Presets, ShipAllFigures) {
  const auto& p = builtin_presets();
  for (const char* name : {"fig2b", "fig2c", "fig3a", "fig3b", "fig3c", "fig3d"}) {
    ASSERT_TRUE(p.count(name)) << name;
    EXPECT_NO_THROW(parse_config(p.at(name), name));
  }
  const auto fig2b = parse_config(p.at("fig2b"));
  EXPECT_DOUBLE_EQ(fig2b.omega_m_mhz, 1.0);
  EXPECT_DOUBLE_EQ(*fig2b.power_nw, 6.0);
  EXPECT_DOUBLE_EQ(parse_config(p.at("fig3a")).omega_m_mhz, 0.83);
  EXPECT_DOUBLE_EQ(parse_config(p.at("fig3d")).sweep.power_nw, 2.5);
}

constexpr const char* kSmallSpectrum =
    "drives:\n  omega_m_mhz: 1\n"
    "noise:\n  variant: static_gaussian\n  sigma_n_mhz: 0.1\n  seed: 5\n  n_samples: 4\n"
    "scan:\n  start_mhz: -1.5\n  stop_mhz: 1.5\n  points: 31\n"
    "output:\n  name: small\n";

json without_runtime(json j) {
  j.erase("runtime_s");
  j["config"].erase("workers");
  j["config"]["output"].erase("dir");
  return j;
}

TEST(Cli, SpectrumIsDeterministic) {
  TempDir dir;
  write_file(dir / "c.yaml", kSmallSpectrum);
  const auto cfg = (dir / "c.yaml").string();
  ASSERT_EQ(cli({"spectrum", "--config", cfg, "--out", (dir / "a").string()}).code, 0);
  ASSERT_EQ(cli({"spectrum", "--config", cfg, "--out", (dir / "b").string()}).code, 0);
  ASSERT_EQ(cli({"spectrum", "--config", cfg, "--workers", "3", "--out", (dir / "c").string()}).code,
            0);
  const std::string a = read_file(dir / "a" / "small.csv");
  EXPECT_EQ(a.substr(0, 27), "detuning_mhz,signal,stderr\n");
  EXPECT_EQ(a, read_file(dir / "b" / "small.csv"));
  EXPECT_EQ(a, read_file(dir / "c" / "small.csv"));
  const json ja = json::parse(read_file(dir / "a" / "small.json"));
  const json jc = json::parse(read_file(dir / "c" / "small.json"));
  EXPECT_EQ(without_runtime(ja), without_runtime(jc));
  EXPECT_EQ(ja["seed"], 5);
  EXPECT_EQ(ja["predictions"]["resonances"][0]["positions_mhz"][3],
            nv::cpt_resonance_positions(1.0, 100.0)[3]);
  // The echo reproduces the run.
  EXPECT_EQ(to_json(parse_config(ja["config"].dump())), ja["config"]);
}

TEST(Cli, SeedOverrideChangesNoise) {
  TempDir dir;
  write_file(dir / "c.yaml", kSmallSpectrum);
  const auto cfg = (dir / "c.yaml").string();
  ASSERT_EQ(cli({"spectrum", "--config", cfg, "--out", (dir / "a").string()}).code, 0);
  ASSERT_EQ(cli({"spectrum", "--config", cfg, "--seed", "6", "--out", (dir / "b").string()}).code, 0);
  EXPECT_NE(read_file(dir / "a" / "small.csv"), read_file(dir / "b" / "small.csv"));
}

TEST(Cli, ExitCodes) {
  TempDir dir;
  EXPECT_EQ(cli({"spectrum", "--preset", "nope"}).code, kExitConfig);
  EXPECT_EQ(cli({"spectrum", "--config", (dir / "missing.yaml").string()}).code, kExitIo);
  EXPECT_EQ(cli({}).code, kExitConfig);
  write_file(dir / "bad.yaml", "scan:\n  pionts: 3\n");
  const auto r = cli({"spectrum", "--config", (dir / "bad.yaml").string()});
  EXPECT_EQ(r.code, kExitConfig);
  EXPECT_NE(r.err.find("bad.yaml:2:3"), std::string::npos);
  write_file(dir / "empty_sweep.yaml", "sweep:\n  kind: power\n");
  EXPECT_EQ(cli({"sweep", "--config", (dir / "empty_sweep.yaml").string()}).code, kExitConfig);
  write_file(dir / "blocker", "");
  write_file(dir / "c.yaml", kSmallSpectrum);
  EXPECT_EQ(cli({"spectrum", "--config", (dir / "c.yaml").string(), "--out",
                 (dir / "blocker" / "sub").string()})
                .code,
            kExitIo);
}

TEST(Cli, FitRecoversSyntheticLorentzian) {
  TempDir dir;
  Spectrum s;
  for (int i = 0; i <= 200; ++i) {
    const double x = 99.0 + 0.01 * i, h = 0.05;
    s.detunings.push_back(x);
    s.signal.push_back(2.0 - 0.5 * h * h / ((x - 100.1) * (x - 100.1) + h * h));
  }
  write_spectrum_csv((dir / "syn.csv").string(), s);
  const auto r = cli({"fit", (dir / "syn.csv").string(), "--peaks", "1", "--out", dir.str()});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_NEAR(j["peaks"][0]["center_mhz"].get<double>(), 100.1, 1e-9);
  EXPECT_NEAR(j["peaks"][0]["fwhm_mhz"].get<double>(), 0.1, 1e-9);
  EXPECT_NEAR(j["peaks"][0]["amplitude"].get<double>(), 0.5, 1e-9);
  EXPECT_LT(j["residual_rms"].get<double>(), 1e-10);
  EXPECT_EQ(j["covariance"].size(), 4u);
  EXPECT_TRUE(fs::exists(dir / "run_fit.json"));
  EXPECT_EQ(cli({"fit", (dir / "syn.csv").string(), "--peaks", "0"}).code, kExitConfig);
}

TEST(Cli, FitReportsMalformedRow) {
  TempDir dir;
  write_file(dir / "bad.csv", "detuning_mhz,signal,stderr\n1,2,0\n2,x,0\n");
  const auto r = cli({"fit", (dir / "bad.csv").string()});
  EXPECT_EQ(r.code, kExitConfig);
  EXPECT_NE(r.err.find("bad.csv:3: bad number 'x'"), std::string::npos);
  write_file(dir / "short.csv", "detuning_mhz,signal,stderr\n1,2\n");
  EXPECT_NE(cli({"fit", (dir / "short.csv").string()}).err.find("short.csv:2"), std::string::npos);
  EXPECT_EQ(cli({"fit", (dir / "none.csv").string()}).code, kExitIo);
}

TEST(Cli, OracleLinewidth) {
  auto r = cli({"oracle"});
  ASSERT_EQ(r.code, 0);
  EXPECT_NEAR(json::parse(r.out)["fwhm_mhz"].get<double>(), 0.0842, 5e-5);
  TempDir dir;
  write_file(dir / "bare.yaml", "drives:\n  omega_0_mhz: 0\nrates:\n  spin_dephasing_mhz: 0.375\n");
  r = cli({"oracle", "--config", (dir / "bare.yaml").string()});
  EXPECT_DOUBLE_EQ(json::parse(r.out)["fwhm_mhz"].get<double>(), 0.75);
  write_file(dir / "nogamma.yaml", "rates:\n  excited_decay_mhz: 0\n");
  EXPECT_EQ(cli({"oracle", "--config", (dir / "nogamma.yaml").string()}).code, kExitConfig);
}

TEST(Cli, SweepAndRabiTables) {
  TempDir dir;
  write_file(dir / "s.yaml",
             "rates:\n  spin_dephasing_mhz: 0.05\n"
             "sweep:\n  kind: power\n  values: [0.5, 1]\n  states: [dressed, bare]\n"
             "output:\n  name: sw\n");
  ASSERT_EQ(cli({"sweep", "--config", (dir / "s.yaml").string(), "--out", dir.str()}).code, 0);
  std::istringstream csv(read_file(dir / "sw.csv"));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "sweep_value,series,fwhm_mhz,fwhm_err,center_mhz,splitting_mhz,splitting_err,status");
  int rows = 0;
  while (std::getline(csv, line)) {
    ++rows;
    EXPECT_NE(line.find("\"ok\""), std::string::npos) << line;
  }
  EXPECT_EQ(rows, 4);
  EXPECT_EQ(json::parse(read_file(dir / "sw.json"))["points"].size(), 4u);

  write_file(dir / "r.yaml", "rabi:\n  rabi_mhz: 2\n  duration_us: 5\noutput:\n  name: rb\n");
  ASSERT_EQ(cli({"rabi", "--config", (dir / "r.yaml").string(), "--out", dir.str()}).code, 0);
  EXPECT_NEAR(json::parse(read_file(dir / "rb.json"))["rabi_mhz"].get<double>(), 2.0, 0.01);
}

// End to end: the fig2b spectrum, fitted with five dips, lands on the
// dressed-state predictions. At 6 nW the optical power itself pulls the
// sidebands outward by 2 to 3 percent of their offset.
TEST(Pipeline, Fig2bFitMatchesPredictions) {
  TempDir dir;
  ASSERT_EQ(cli({"spectrum", "--preset", "fig2b", "--out", dir.str()}).code, 0);
  const auto r = cli({"fit", (dir / "fig2b.csv").string(), "--peaks", "5", "--out", dir.str()});
  ASSERT_EQ(r.code, 0) << r.err;
  const json fit = json::parse(r.out);
  const json side = json::parse(read_file(dir / "fig2b.json"));
  const auto predicted = side["predictions"]["resonances"][0]["positions_mhz"];
  std::vector<double> centers;
  for (const auto& p : fit["peaks"]) centers.push_back(p["center_mhz"].get<double>());
  std::sort(centers.begin(), centers.end());
  for (std::size_t k = 0; k < 5; ++k) {
    const double want = predicted[k].get<double>();
    EXPECT_NEAR(centers[k], want, 0.01 * want);
    if (k != 2) {
      EXPECT_NEAR((centers[k] - 100.0) / (want - 100.0), 1.0, 0.05);
    }
  }
}

}  // namespace
}  // namespace nvdress::cli
