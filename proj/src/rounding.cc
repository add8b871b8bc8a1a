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
#include <numeric>

#include "fullswap/swap_engine.h"

namespace fullswap {

MixedAction MixedAction::FromDense(const Vec& p, double drop) {
  MixedAction a;
  double total = 0.0;
  for (int i = 0; i < p.size(); ++i) {
    if (p[i] > drop) {
      a.support.push_back(i);
      a.probs.push_back(p[i]);
      total += p[i];
    }
  }
  if (!(total > 0.0)) throw NumericalError("MixedAction: no positive mass");
  for (double& v : a.probs) v /= total;
  return a;
}

Vec MixedAction::ToDense(int n) const {
  Vec p = Vec::Zero(n);
  for (size_t i = 0; i < support.size(); ++i) p[support[i]] += probs[i];
  return p;
}

double MixedAction::Probability(int i) const {
  for (size_t k = 0; k < support.size(); ++k) {
    if (support[k] == i) return probs[k];
  }
  return 0.0;
}

Vec MixedAction::Mean(const Discretization& disc) const {
  Vec m = Vec::Zero(disc.dimension());
  for (size_t i = 0; i < support.size(); ++i) m += probs[i] * disc.point(support[i]);
  return m;
}

void MixedAction::Validate(int n, double tol) const {
  if (support.size() != probs.size() || support.empty()) {
    throw InvalidInputError("MixedAction: support and probabilities differ");
  }
  double total = 0.0;
  for (size_t i = 0; i < support.size(); ++i) {
    if (support[i] < 0 || support[i] >= n) {
      throw InvalidInputError("MixedAction: index out of range");
    }
    for (size_t j = 0; j < i; ++j) {
      if (support[i] == support[j]) {
        throw InvalidInputError("MixedAction: repeated index");
      }
    }
    if (!(probs[i] >= 0.0) || !std::isfinite(probs[i])) {
      throw InvalidInputError("MixedAction: negative probability");
    }
    total += probs[i];
  }
  if (std::abs(total - 1.0) > tol) {
    throw InvalidInputError("MixedAction: probabilities do not sum to one");
  }
}

Mat MarkovPolicy::ToDense() const {
  const int k = size();
  Mat q = Mat::Zero(k, k);
  for (int s = 0; s < k; ++s) {
    for (size_t i = 0; i < rows[s].support.size(); ++i) {
      q(s, rows[s].support[i]) += rows[s].probs[i];
    }
  }
  return q;
}

void MarkovPolicy::Validate(double tol) const {
  if (rows.empty()) throw InvalidInputError("MarkovPolicy: empty");
  for (const auto& r : rows) r.Validate(size(), tol);
}

std::string ToString(RoundingRule r) {
  switch (r) {
    case RoundingRule::kProjection:
      return "projection";
    case RoundingRule::kBarycentric:
      return "barycentric";
    case RoundingRule::kInterval:
      return "interval";
  }
  return "unknown";
}

MixedAction RoundProjection(const Vec& q, const Discretization& disc) {
  return MixedAction::Point(disc.NearestPoint(q));
}

MixedAction RoundBarycentric(const Vec& q, const Discretization& disc) {
  const SimplexHit hit = disc.LocateSimplex(q);
  std::vector<int> order(hit.vertices.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return hit.vertices[a] < hit.vertices[b]; });
  MixedAction a;
  double total = 0.0;
  for (int i : order) {
    a.support.push_back(hit.vertices[i]);
    a.probs.push_back(hit.weights[i]);
    total += hit.weights[i];
  }
  for (double& p : a.probs) p /= total;
  return a;
}

IntervalRoundingResult RoundInterval(double x, const Discretization& grid) {
  if (std::isnan(x)) throw InvalidInputError("RoundInterval: NaN input");
  if (grid.dimension() != 1) throw InvalidInputError("RoundInterval: grid must be 1D");
  IntervalRoundingResult out;
  const int n = grid.size();
  if (n == 1) {
    out.action = MixedAction::Point(0);
    out.clamped = x != grid.point(0)[0];
    return out;
  }
  if (!grid.is_sorted_chain()) {
    throw InvalidInputError("RoundInterval: grid must be a sorted 1D chain");
  }
  const auto& pts = grid.points();
  const double lo = pts.front()[0];
  const double hi = pts.back()[0];
  if (x < lo || x > hi) {
    out.clamped = true;
    x = std::clamp(x, lo, hi);
  }
  auto it = std::upper_bound(pts.begin(), pts.end(), x,
                             [](double v, const Vec& p) { return v < p[0]; });
  int i = std::clamp(static_cast<int>(it - pts.begin()) - 1, 0, n - 2);
  const double a = pts[i][0];
  const double b = pts[i + 1][0];
  if (x == a) {
    out.action = MixedAction::Point(i);
  } else if (x == b) {
    out.action = MixedAction::Point(i + 1);
  } else {
    const double t = (x - a) / (b - a);
    out.action = {{i, i + 1}, {(b - x) / (b - a), t}};
  }
  return out;
}

MixedAction Round(RoundingRule rule, const Vec& q, const Discretization& disc) {
  switch (rule) {
    case RoundingRule::kProjection:
      return RoundProjection(q, disc);
    case RoundingRule::kBarycentric:
      return RoundBarycentric(q, disc);
    case RoundingRule::kInterval:
      if (q.size() != 1) throw InvalidInputError("interval rounding needs d = 1");
      return RoundInterval(q[0], disc).action;
  }
  throw ConfigurationError("unknown rounding rule");
}

double RoundingBound(RoundingRule rule, DiscretizationKind kind, double lipschitz,
                     double beta, double eps) {
  if (kind == DiscretizationKind::kBoundaryPolytope) return lipschitz * eps * eps;
  if (rule == RoundingRule::kProjection) return lipschitz * eps;
  return (lipschitz + beta / 8.0) * eps * eps;
}

}  // namespace fullswap
