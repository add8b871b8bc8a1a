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

#include "fullswap/swap_engine.h"

namespace fullswap {
namespace {

// Grassmann-Taksar-Heyman elimination. Every update adds nonnegative terms,
// so there is no cancellation even when the chain is nearly reducible.
Vec GthSolve(Mat a) {
  const int k = static_cast<int>(a.rows());
  for (int n = k - 1; n >= 1; --n) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += a(n, j);
    if (!(s > 0.0)) throw NumericalError("stationary solve: zero pivot");
    for (int i = 0; i < n; ++i) a(i, n) /= s;
    for (int i = 0; i < n; ++i) {
      const double f = a(i, n);
      if (f == 0.0) continue;
      for (int j = 0; j < n; ++j) a(i, j) += f * a(n, j);
    }
  }
  Vec x = Vec::Zero(k);
  x[0] = 1.0;
  for (int n = 1; n < k; ++n) {
    double v = 0.0;
    for (int i = 0; i < n; ++i) v += x[i] * a(i, n);
    x[n] = v;
  }
  return x / x.sum();
}

Vec Multiply(const MarkovPolicy& q, const Vec& x) {
  Vec y = Vec::Zero(x.size());
  for (int s = 0; s < q.size(); ++s) {
    if (x[s] == 0.0) continue;
    const auto& row = q.rows[s];
    for (size_t i = 0; i < row.support.size(); ++i) {
      y[row.support[i]] += x[s] * row.probs[i];
    }
  }
  return y;
}

}  // namespace

double StationaryResidual(const MarkovPolicy& q, const Vec& x) {
  if (x.size() != q.size()) throw InvalidInputError("residual: size mismatch");
  return (Multiply(q, x) - x).lpNorm<1>();
}

StationaryResult StationaryDistribution(const MarkovPolicy& q,
                                        const StationaryOptions& options) {
  q.Validate();
  const int k = q.size();
  const double gamma = options.damping;
  StationaryResult result;
  Vec x;
  if (k == 1) {
    x = Vec::Ones(1);
  } else if (k <= options.direct_limit) {
    Mat p = q.ToDense() * (1.0 - gamma);
    p.array() += gamma / k;
    x = GthSolve(std::move(p));
  } else {
    result.direct = false;
    x = Vec::Constant(k, 1.0 / k);
    int it = 0;
    double change = 1.0;
    for (; it < options.max_iterations && change > options.tolerance; ++it) {
      // Lazy damped chain: same stationary law, no periodicity.
      Vec y = Multiply(q, x) * (1.0 - gamma);
      y.array() += gamma / k;
      y = 0.5 * (x + y);
      y /= y.sum();
      change = (y - x).lpNorm<1>();
      x = std::move(y);
    }
    result.iterations = it;
    if (change > options.tolerance &&
        StationaryResidual(q, x) > 1e-9) {
      throw NumericalError("stationary solve: power iteration did not converge "
                           "after " + std::to_string(it) + " iterations, "
                           "last change " + std::to_string(change));
    }
  }
  for (int i = 0; i < k; ++i) x[i] = std::max(x[i], 0.0);
  x /= x.sum();
  const double full_residual = StationaryResidual(q, x);
  // Damping leaves ~1e-12 mass on transient states; drop it when doing so
  // does not hurt stationarity.
  Vec pruned = x;
  for (int i = 0; i < k; ++i) {
    if (pruned[i] <= 1e-11) pruned[i] = 0.0;
  }
  pruned /= pruned.sum();
  const double pruned_residual = StationaryResidual(q, pruned);
  if (pruned_residual <= std::max(full_residual, 1e-10)) {
    result.distribution = MixedAction::FromDense(pruned);
    result.residual = pruned_residual;
  } else {
    result.distribution = MixedAction::FromDense(x);
    result.residual = full_residual;
  }
  if (!(result.residual <= 1e-9)) {
    throw NumericalError("stationary solve: residual " +
                         std::to_string(result.residual) + " exceeds 1e-9");
  }
  return result;
}

}  // namespace fullswap
