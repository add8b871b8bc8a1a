// Copyright 2026 The fullswap Authors. All rights reserved.
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

#include <algorithm>
#include <cmath>
#include <set>

#include "fullswap/harness.h"

namespace fullswap {

RateFit FitRate(const std::vector<std::pair<double, double>>& series) {
  std::set<double> horizons;
  for (const auto& [t, v] : series) {
    if (!(t > 0) || !std::isfinite(t) || std::isnan(v)) {
      throw InvalidInputError("fit_rate: horizons must be positive and values defined");
    }
    horizons.insert(t);
  }
  if (horizons.size() < 3) throw InvalidInputError("fit_rate: need three horizons");
  if (*horizons.rbegin() < 10.0 * *horizons.begin()) {
    throw InvalidInputError("fit_rate: horizons must span a decade");
  }
  RateFit fit;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(series.size());
  for (const auto& [t, v] : series) {
    double value = v;
    if (!(value > 1e-9)) {
      value = 1e-9;
      fit.floored = true;
    }
    const double x = std::log(t);
    const double y = std::log(value);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double mx = sx / n;
  const double my = sy / n;
  fit.slope = (sxy - n * mx * my) / (sxx - n * mx * mx);
  fit.intercept = my - fit.slope * mx;
  return fit;
}

}  // namespace fullswap
