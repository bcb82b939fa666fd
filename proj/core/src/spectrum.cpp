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


#include "nvdress/spectrum.hpp"

#include <cmath>

#include "nvdress/errors.hpp"

namespace nvdress {

void Spectrum::validate() const {
  if (signal.size() != detunings.size()) throw InvalidArgument("spectrum: signal/grid length mismatch");
  if (!standard_error.empty() && standard_error.size() != detunings.size()) {
    throw InvalidArgument("spectrum: stderr/grid length mismatch");
  }
  for (double s : signal) {
    if (!(s >= 0.0) || !std::isfinite(s)) throw InvalidArgument("spectrum: signal must be finite and >= 0");
  }
}

}  // namespace nvdress
