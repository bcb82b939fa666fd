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


#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "nvdress/spectrum.hpp"

namespace nvdress::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,
  kExitNumerical = 2,
  kExitIo = 3,
};

/// Runs the `nvdress` command line; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Built-in run configurations keyed by name (YAML text).
const std::map<std::string, std::string>& builtin_presets();

/// Fixed 17-significant-digit decimal used in every CSV.
std::string format_number(double value);

/// Reads a CSV written by the spectrum command. Malformed input raises
/// ConfigError naming the file and row.
Spectrum read_spectrum_csv(const std::string& path);
void write_spectrum_csv(const std::string& path, const Spectrum& spectrum);

}  // namespace nvdress::cli
