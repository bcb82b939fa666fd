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

#include <map>
#include <string>
#include <vector>

namespace nvdress {

/// Emission versus two-photon optical detuning.
struct Spectrum {
  std::vector<double> detunings;  // MHz
  std::vector<double> signal;     // Gamma_e x mean rho_ee, in 1/us
  /// Standard error per point; empty when the run was deterministic.
  std::vector<double> standard_error;
  /// Flat record of the run configuration (key -> printed value).
  std::map<std::string, std::string> metadata;

  std::size_t size() const { return detunings.size(); }
  bool has_standard_error() const { return !standard_error.empty(); }
  /// Checks equal lengths and non-negative signal; throws InvalidArgument.
  void validate() const;
};

}  // namespace nvdress
