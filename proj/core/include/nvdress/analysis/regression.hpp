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

#include <span>

namespace nvdress::analysis {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_error = 0.0;
  double intercept_error = 0.0;
  double r_squared = 0.0;
};

/// Closed-form (weighted) least squares y = slope * x + intercept. With
/// y_err the weights are 1/y_err^2 and errors are taken as absolute;
/// without, errors are scaled by the residual variance. Needs >= 3 points.
LinearFit linear_fit(std::span<const double> x, std::span<const double> y,
                     std::span<const double> y_err = {});

}  // namespace nvdress::analysis
