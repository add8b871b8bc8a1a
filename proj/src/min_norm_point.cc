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
#include <limits>
#include <vector>

#include "fullswap/geometry.h"

namespace fullswap {
namespace {

// Minimizes |p_0 + sum_i a_i (p_i - p_0)| over the affine hull of the
// selected points and returns the affine weights.
std::vector<double> AffineMinimizer(const std::vector<Vec>& points,
                                    const std::vector<int>& set) {
  const int m = static_cast<int>(set.size());
  if (m == 1) return {1.0};
  const Vec& base = points[set[0]];
  Mat directions(base.size(), m - 1);
  for (int i = 1; i < m; ++i) directions.col(i - 1) = points[set[i]] - base;
  Eigen::VectorXd alpha =
      directions.completeOrthogonalDecomposition().solve(-base);
  std::vector<double> mu(m);
  mu[0] = 1.0 - alpha.sum();
  for (int i = 1; i < m; ++i) mu[i] = alpha[i - 1];
  return mu;
}

Vec Combine(const std::vector<Vec>& points, const std::vector<int>& set,
            const std::vector<double>& lambda) {
  Vec x = Vec::Zero(points[set[0]].size());
  for (size_t i = 0; i < set.size(); ++i) x += lambda[i] * points[set[i]];
  return x;
}

}  // namespace

MinNormPointResult MinNormPoint(const std::vector<Vec>& points, double tol) {
  const int n = static_cast<int>(points.size());
  if (n == 0) throw InvalidInputError("MinNormPoint: empty point set");
  const auto d = points[0].size();
  double scale = 0.0;
  int first = 0;
  for (int i = 0; i < n; ++i) {
    if (points[i].size() != d) {
      throw InvalidInputError("MinNormPoint: inconsistent dimensions");
    }
    CheckFinite(points[i], "MinNormPoint input");
    const double sq = points[i].squaredNorm();
    scale = std::max(scale, sq);
    if (sq < points[first].squaredNorm()) first = i;
  }
  scale = std::max(scale, std::numeric_limits<double>::min());

  std::vector<int> set = {first};
  std::vector<double> lambda = {1.0};
  Vec x = points[first];
  MinNormPointResult result;
  const int max_iterations = 100 + 50 * n;
  int it = 0;
  for (; it < max_iterations; ++it) {
    const double xx = x.squaredNorm();
    if (xx <= 1e-30 * scale) break;
    int j = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      const double v = x.dot(points[i]);
      if (v < best) {
        best = v;
        j = i;
      }
    }
    if (xx - best <= tol * scale) break;
    if (std::find(set.begin(), set.end(), j) != set.end()) break;
    set.push_back(j);
    lambda.push_back(0.0);

    bool added_survives = true;
    while (true) {
      std::vector<double> mu = AffineMinimizer(points, set);
      bool interior = true;
      for (double m : mu) interior = interior && (m > 0.0);
      if (interior) {
        lambda = std::move(mu);
        break;
      }
      double theta = 1.0;
      for (size_t i = 0; i < set.size(); ++i) {
        if (mu[i] <= 0.0) {
          const double denom = lambda[i] - mu[i];
          const double t = denom > 0.0 ? lambda[i] / denom : 0.0;
          theta = std::min(theta, t);
        }
      }
      for (size_t i = 0; i < set.size(); ++i) {
        lambda[i] = theta * mu[i] + (1.0 - theta) * lambda[i];
      }
      // Drop every coordinate that hit zero; at least one does.
      std::vector<int> kept_set;
      std::vector<double> kept_lambda;
      int drop = -1;
      double drop_value = std::numeric_limits<double>::infinity();
      for (size_t i = 0; i < set.size(); ++i) {
        if (lambda[i] < drop_value) {
          drop_value = lambda[i];
          drop = static_cast<int>(i);
        }
      }
      for (size_t i = 0; i < set.size(); ++i) {
        if (static_cast<int>(i) == drop || lambda[i] <= 1e-16) {
          if (set[i] == j) added_survives = false;
          continue;
        }
        kept_set.push_back(set[i]);
        kept_lambda.push_back(lambda[i]);
      }
      set = std::move(kept_set);
      lambda = std::move(kept_lambda);
      double total = 0.0;
      for (double l : lambda) total += l;
      for (double& l : lambda) l /= total;
      if (set.size() == 1) {
        lambda = {1.0};
        break;
      }
    }
    const Vec next = Combine(points, set, lambda);
    // No strict progress means round-off has taken over.
    if (!added_survives && next.squaredNorm() >= xx) {
      x = next;
      break;
    }
    x = next;
  }

  std::vector<int> order(set.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return set[a] < set[b]; });
  for (int i : order) {
    if (lambda[i] <= 0.0) continue;
    result.support.push_back(set[i]);
    result.weights.push_back(lambda[i]);
  }
  result.point = x;
  result.iterations = it;
  return result;
}

MinNormPointResult ProjectOntoHull(const Vec& x, const std::vector<Vec>& points,
                                   double tol) {
  std::vector<Vec> shifted;
  shifted.reserve(points.size());
  for (const Vec& p : points) {
    if (p.size() != x.size()) {
      throw InvalidInputError("ProjectOntoHull: dimension mismatch");
    }
    shifted.push_back(p - x);
  }
  MinNormPointResult r = MinNormPoint(shifted, tol);
  r.point += x;
  return r;
}

std::vector<double> BarycentricWeights(const Vec& x,
                                       const std::vector<Vec>& vertices) {
  const int k = static_cast<int>(vertices.size());
  if (k == 0) throw InvalidInputError("BarycentricWeights: no vertices");
  const int d = static_cast<int>(x.size());
  Mat m(d + 1, k);
  for (int i = 0; i < k; ++i) {
    if (vertices[i].size() != d) {
      throw InvalidInputError("BarycentricWeights: dimension mismatch");
    }
    m.block(0, i, d, 1) = vertices[i];
    m(d, i) = 1.0;
  }
  Vec rhs(d + 1);
  rhs.head(d) = x;
  rhs[d] = 1.0;
  Vec w;
  bool solved = false;
  if (k == d + 1) {
    Eigen::FullPivLU<Mat> lu(m);
    lu.setThreshold(1e-12);
    if (lu.isInvertible()) {
      w = lu.solve(rhs);
      solved = true;
    }
  }
  if (!solved) w = m.completeOrthogonalDecomposition().solve(rhs);
  std::vector<double> out(k);
  double total = 0.0;
  for (int i = 0; i < k; ++i) {
    out[i] = std::max(0.0, w[i]);
    total += out[i];
  }
  if (!(total > 0.0)) {
    throw NumericalError("BarycentricWeights: degenerate solve");
  }
  for (double& v : out) v /= total;
  return out;
}

}  // namespace fullswap
