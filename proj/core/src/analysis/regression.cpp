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


#include "nvdress/analysis/regression.hpp"

#include <cmath>

#include "nvdress/errors.hpp"

namespace nvdress::analysis {

LinearFit linear_fit(std::span<const double> x, std::span<const double> y,
                     std::span<const double> y_err) {
  const std::size_t n = x.size();
  if (y.size() != n) throw InvalidArgument("linear_fit: x/y length mismatch");
  if (n < 3) throw InvalidArgument("linear_fit: need at least 3 points");
  const bool weighted = !y_err.empty();
  if (weighted && y_err.size() != n) throw InvalidArgument("linear_fit: y_err length mismatch");

  double sw = 0, sx = 0, sy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double w = 1.0;
    if (weighted) {
      if (!(y_err[i] > 0.0)) throw InvalidArgument("linear_fit: y_err must be > 0");
      w = 1.0 / (y_err[i] * y_err[i]);
    }
    sw += w;
    sx += w * x[i];
    sy += w * y[i];
  }
  const double mx = sx / sw, my = sy / sw;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = weighted ? 1.0 / (y_err[i] * y_err[i]) : 1.0;
    sxx += w * (x[i] - mx) * (x[i] - mx);
    sxy += w * (x[i] - mx) * (y[i] - my);
    syy += w * (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 1e-300)) throw InvalidArgument("linear_fit: x has zero variance");

  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ssr = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = weighted ? 1.0 / (y_err[i] * y_err[i]) : 1.0;
    const double d = y[i] - (f.slope * x[i] + f.intercept);
    ssr += w * d * d;
  }
  f.r_squared = syy > 0.0 ? 1.0 - ssr / syy : 1.0;
  const double variance = weighted ? 1.0 : ssr / static_cast<double>(n - 2);
  f.slope_error = std::sqrt(variance / sxx);
  f.intercept_error = std::sqrt(variance * (1.0 / sw + mx * mx / sxx));
  return f;
}

}  // namespace nvdress::analysis
