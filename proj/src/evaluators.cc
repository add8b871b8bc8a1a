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
#include <map>
#include <random>
#include <utility>

#include "fullswap/harness.h"

namespace fullswap {
namespace {

// argmin over the body of 0.5*a*|y|^2 + <b, y>.
Vec MinimizeIsotropic(double a, const Vec& b, const ConvexBody& body) {
  const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
  if (a > 1e-14 * scale) return body.Project(-b / a);
  if (a >= -1e-14 * scale) return body.MinimizeLinear(b);
  // Concave: the minimum sits at an extreme point.
  auto value = [&](const Vec& y) { return 0.5 * a * y.squaredNorm() + b.dot(y); };
  std::vector<Vec> candidates;
  if (const auto* box = dynamic_cast<const Box*>(&body)) {
    if (box->dimension() > 16) throw UnsupportedError("concave minimization over a box with d > 16");
    candidates = box->Corners();
  } else if (const auto* poly = dynamic_cast<const Polytope*>(&body)) {
    candidates = poly->vertices();
  } else if (const auto* ball = dynamic_cast<const Ball*>(&body)) {
    // On the sphere the objective is affine in the direction.
    const Vec dir = a * ball->center() + b;
    if (dir.norm() == 0.0) return ball->center() + ball->radius() * Vec::Unit(b.size(), 0);
    return ball->center() - ball->radius() * dir / dir.norm();
  } else {
    throw UnsupportedError("concave minimization over this body");
  }
  Vec best = candidates.front();
  double best_value = value(best);
  for (const Vec& c : candidates) {
    const double v = value(c);
    if (v < best_value) {
      best_value = v;
      best = c;
    }
  }
  return best;
}

bool AllQuadratic(const std::vector<const LossSpec*>& losses) {
  for (const LossSpec* l : losses) {
    if (!l->quadratic()) return false;
  }
  return true;
}

double WeightedValue(const std::vector<const LossSpec*>& losses,
                     const std::vector<double>& weights, const Vec& y) {
  double total = 0.0;
  for (size_t i = 0; i < losses.size(); ++i) total += weights[i] * losses[i]->Value(y);
  return total;
}

double WeightedValue1d(const std::vector<const LossSpec*>& losses,
                       const std::vector<double>& weights, double y) {
  double total = 0.0;
  for (size_t i = 0; i < losses.size(); ++i) total += weights[i] * losses[i]->Value1d(y);
  return total;
}

double ClosedForm(const std::vector<const LossSpec*>& losses,
                  const std::vector<double>& weights, const ConvexBody& body,
                  Vec* argmin) {
  const int d = body.dimension();
  double a = 0.0;
  Vec b = Vec::Zero(d);
  for (size_t i = 0; i < losses.size(); ++i) {
    const IsotropicQuadratic& q = *losses[i]->quadratic();
    a += weights[i] * q.curvature;
    b += weights[i] * q.linear;
  }
  const Vec y = MinimizeIsotropic(a, b, body);
  if (argmin) *argmin = y;
  return WeightedValue(losses, weights, y);
}

// Fine grid followed by golden-section refinement around the best cell.
double GridSearch(const std::vector<const LossSpec*>& losses,
                  const std::vector<double>& weights, const ConvexBody& body,
                  const EvaluatorOptions& options, Vec* argmin) {
  const auto [lo_v, hi_v] = body.BoundingBox();
  const double lo = lo_v[0];
  const double hi = hi_v[0];
  const int n = std::max(2, options.grid_points);
  auto f = [&](double y) { return WeightedValue1d(losses, weights, y); };
  auto at = [&](int i) { return i == n - 1 ? hi : lo + (hi - lo) * i / (n - 1); };
  int best_i = 0;
  double best = f(lo);
  for (int i = 1; i < n; ++i) {
    const double v = f(at(i));
    if (v < best) {
      best = v;
      best_i = i;
    }
  }
  double best_y = at(best_i);
  double a = at(std::max(0, best_i - 1));
  double b = at(std::min(n - 1, best_i + 1));
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double e = a + inv_phi * (b - a);
  double fc = f(c);
  double fe = f(e);
  while (b - a > options.golden_width) {
    if (fc <= fe) {
      b = e;
      e = c;
      fe = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = e;
      fc = fe;
      e = a + inv_phi * (b - a);
      fe = f(e);
    }
  }
  for (double y : {a, b, 0.5 * (a + b)}) {
    const double v = f(y);
    if (v < best) {
      best = v;
      best_y = y;
    }
  }
  if (argmin) *argmin = Vec::Constant(1, best_y);
  return best;
}

// Multi-start projected gradient with backtracking; keeps the best iterate.
double ProjectedGradient(const std::vector<const LossSpec*>& losses,
                         const std::vector<double>& weights, const ConvexBody& body,
                         const EvaluatorOptions& options, Vec* argmin) {
  const int d = body.dimension();
  auto f = [&](const Vec& y) { return WeightedValue(losses, weights, y); };
  auto grad = [&](const Vec& y) {
    Vec g = Vec::Zero(d);
    for (size_t i = 0; i < losses.size(); ++i) g += weights[i] * losses[i]->Subgradient(y);
    return g;
  };
  std::mt19937_64 rng = MakeRng(options.seed, 0x6576616cULL);
  const auto [lo, hi] = body.BoundingBox();
  const double diameter = std::max(body.DiameterBound(), 1e-12);
  Vec best_y = body.Project(0.5 * (lo + hi));
  double best = f(best_y);
  for (int start = 0; start < std::max(1, options.starts); ++start) {
    Vec y = start == 0 ? best_y : SampleUniform(body, rng);
    double fy = f(y);
    double step = diameter;
    for (int it = 0; it < options.gradient_iterations; ++it) {
      const Vec g = grad(y);
      const double gn = g.norm();
      if (gn == 0.0) break;
      bool moved = false;
      double s = step;
      while (s > 1e-14 * diameter) {
        const Vec cand = body.Project(y - (s / gn) * g);
        const double fc = f(cand);
        if (fc < fy) {
          moved = (cand - y).norm() > 1e-15 * diameter;
          y = cand;
          fy = fc;
          break;
        }
        s *= 0.5;
      }
      if (!moved) break;
      step = std::min(diameter, 2.0 * s);
    }
    if (fy < best) {
      best = fy;
      best_y = y;
    }
  }
  if (argmin) *argmin = best_y;
  return best;
}

bool ConvexClass(LossClass c) {
  switch (c) {
    case LossClass::kConvex:
    case LossClass::kLinear:
    case LossClass::kStronglyConvex:
    case LossClass::kScSmooth:
    case LossClass::kNsc:
      return true;
    default:
      return false;
  }
}

}  // namespace

double MinimizeWeightedSum(const std::vector<const LossSpec*>& losses,
                           const std::vector<double>& weights,
                           const ConvexBody& body, const EvaluatorOptions& options,
                           Vec* argmin) {
  if (losses.size() != weights.size()) {
    throw InvalidInputError("evaluator: losses and weights differ in length");
  }
  const int d = body.dimension();
  if (losses.empty()) {
    if (argmin) *argmin = body.Project(Vec::Zero(d));
    return 0.0;
  }
  for (const LossSpec* l : losses) {
    if (l->dimension() != d) throw InvalidInputError("evaluator: loss dimension mismatch");
  }
  InnerMinMethod method = options.method;
  if (method == InnerMinMethod::kAuto) {
    if (AllQuadratic(losses)) {
      method = InnerMinMethod::kClosedForm;
    } else if (d == 1) {
      method = InnerMinMethod::kGridSearch;
    } else {
      method = InnerMinMethod::kProjectedGradient;
    }
  }
  switch (method) {
    case InnerMinMethod::kClosedForm:
      if (!AllQuadratic(losses)) {
        throw UnsupportedError("closed-form minimization needs quadratic losses");
      }
      return ClosedForm(losses, weights, body, argmin);
    case InnerMinMethod::kGridSearch:
      if (d != 1) throw UnsupportedError("grid search is one-dimensional");
      return GridSearch(losses, weights, body, options, argmin);
    case InnerMinMethod::kProjectedGradient:
      if (d > 3) throw UnsupportedError("projected gradient evaluator supports d <= 3");
      for (const LossSpec* l : losses) {
        if (!ConvexClass(l->loss_class())) {
          throw UnsupportedError("projected gradient needs convex losses, got " +
                                 ToString(l->loss_class()));
        }
      }
      return ProjectedGradient(losses, weights, body, options, argmin);
    case InnerMinMethod::kAuto:
      break;
  }
  throw UnsupportedError("unknown minimization method");
}

double FullSwapRegret(const std::vector<MixedAction>& plays,
                      const std::vector<LossSpec>& losses,
                      const std::vector<Vec>& points, const ConvexBody& body,
                      const EvaluatorOptions& options) {
  if (plays.size() != losses.size()) {
    throw InvalidInputError("evaluator: plays and losses differ in length");
  }
  const int k = static_cast<int>(points.size());
  std::vector<std::vector<const LossSpec*>> terms(k);
  std::vector<std::vector<double>> weights(k);
  for (size_t t = 0; t < plays.size(); ++t) {
    plays[t].Validate(k);
    for (size_t i = 0; i < plays[t].support.size(); ++i) {
      if (plays[t].probs[i] <= 0.0) continue;
      terms[plays[t].support[i]].push_back(&losses[t]);
      weights[plays[t].support[i]].push_back(plays[t].probs[i]);
    }
  }
  double total = 0.0;
  for (int s = 0; s < k; ++s) {
    if (terms[s].empty()) continue;
    const double incurred = WeightedValue(terms[s], weights[s], points[s]);
    total += incurred - MinimizeWeightedSum(terms[s], weights[s], body, options);
  }
  return total;
}

double CalibrationFullSwapRegret(const CalibrationTranscript& tr,
                                 const EvaluatorOptions& options) {
  if (tr.forecasts.size() != tr.outcomes.size()) {
    throw InvalidInputError("transcript: forecasts and outcomes differ in length");
  }
  // Squared errors against a bit take two forms only, so each forecast value
  // needs the mass on each outcome.
  std::map<double, std::pair<double, double>> mass;
  for (size_t t = 0; t < tr.forecasts.size(); ++t) {
    const Forecast& f = tr.forecasts[t];
    f.Validate();
    for (size_t i = 0; i < f.values.size(); ++i) {
      auto& m = mass[f.values[i]];
      (tr.outcomes[t] ? m.second : m.first) += f.probs[i];
    }
  }
  const auto unit = MakeInterval(0.0, 1.0);
  const LossSpec zero = MakeCalibrationLoss(0.0);
  const LossSpec one = MakeCalibrationLoss(1.0);
  const std::vector<const LossSpec*> terms = {&zero, &one};
  double total = 0.0;
  for (const auto& [p, m] : mass) {
    if (m.first + m.second <= 0.0) continue;
    const double incurred = m.first * p * p + m.second * (p - 1.0) * (p - 1.0);
    total += incurred - MinimizeWeightedSum(terms, {m.first, m.second}, *unit, options);
  }
  return total;
}

QuadraticRegretTracker::QuadraticRegretTracker(std::vector<Vec> points,
                                               std::shared_ptr<const ConvexBody> body)
    : points_(std::move(points)), body_(std::move(body)) {
  const size_t k = points_.size();
  const int d = body_->dimension();
  mass_.assign(k, 0.0);
  curvature_.assign(k, 0.0);
  linear_.assign(k, Vec::Zero(d));
  constant_.assign(k, 0.0);
  incurred_.assign(k, 0.0);
}

void QuadraticRegretTracker::Accumulate(int s, double weight, const LossSpec& loss) {
  if (!loss.quadratic()) throw UnsupportedError("tracker needs a quadratic loss");
  const IsotropicQuadratic& q = *loss.quadratic();
  mass_[s] += weight;
  curvature_[s] += weight * q.curvature;
  linear_[s] += weight * q.linear;
  constant_[s] += weight * q.constant;
}

void QuadraticRegretTracker::Add(int s, double weight, const LossSpec& loss) {
  Accumulate(s, weight, loss);
  incurred_[s] += weight * loss.quadratic()->Value(points_[s]);
}

void QuadraticRegretTracker::AddAt(int s, double weight, const LossSpec& loss,
                                   const Vec& where) {
  Accumulate(s, weight, loss);
  incurred_[s] += weight * loss.quadratic()->Value(where);
}

void QuadraticRegretTracker::AddValue(int s, double weight, const LossSpec& loss,
                                      double value) {
  Accumulate(s, weight, loss);
  incurred_[s] += weight * value;
}

double QuadraticRegretTracker::Comparator(int s) const {
  if (mass_[s] <= 0.0) return 0.0;
  const Vec y = MinimizeIsotropic(curvature_[s], linear_[s], *body_);
  return 0.5 * curvature_[s] * y.squaredNorm() + linear_[s].dot(y) + constant_[s];
}

double QuadraticRegretTracker::ComparatorOver(int s,
                                              const std::vector<Vec>& candidates) const {
  if (mass_[s] <= 0.0) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (const Vec& y : candidates) {
    best = std::min(best, 0.5 * curvature_[s] * y.squaredNorm() + linear_[s].dot(y) +
                              constant_[s]);
  }
  return best;
}

double QuadraticRegretTracker::Total() const {
  double total = 0.0;
  for (int s = 0; s < size(); ++s) {
    if (mass_[s] > 0.0) total += incurred_[s] - Comparator(s);
  }
  return total;
}

}  // namespace fullswap
