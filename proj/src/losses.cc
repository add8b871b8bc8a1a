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
#include <memory>
#include <string>

#include "fullswap/losses.h"

namespace fullswap {

std::string ToString(LossClass c) {
  switch (c) {
    case LossClass::kGeneral:
      return "general";
    case LossClass::kConvex:
      return "convex";
    case LossClass::kConcave:
      return "concave";
    case LossClass::kLinear:
      return "linear";
    case LossClass::kSmooth:
      return "smooth";
    case LossClass::kStronglyConvex:
      return "strongly-convex";
    case LossClass::kScSmooth:
      return "sc-smooth";
    case LossClass::kNsc:
      return "nsc";
  }
  return "unknown";
}

LossClass LossClassFromString(const std::string& s) {
  if (s == "general") return LossClass::kGeneral;
  if (s == "convex") return LossClass::kConvex;
  if (s == "concave" || s == "concave-or-linear") return LossClass::kConcave;
  if (s == "linear") return LossClass::kLinear;
  if (s == "smooth") return LossClass::kSmooth;
  if (s == "strongly-convex") return LossClass::kStronglyConvex;
  if (s == "sc-smooth") return LossClass::kScSmooth;
  if (s == "nsc") return LossClass::kNsc;
  throw ConfigurationError("unknown loss class: " + s);
}

LossSpec::LossSpec(int dimension, ValueFn value, GradientFn gradient,
                   LossClass cls, double lipschitz, double alpha, double beta)
    : dimension_(dimension),
      value_(std::move(value)),
      gradient_(std::move(gradient)),
      class_(cls),
      lipschitz_(lipschitz),
      alpha_(alpha),
      beta_(beta) {
  if (dimension_ <= 0) throw InvalidInputError("LossSpec: bad dimension");
  if (!value_ || !gradient_) throw InvalidInputError("LossSpec: missing function");
  if (!(lipschitz_ >= 0) || !(alpha_ >= 0) || !(beta_ >= 0)) {
    throw InvalidInputError("LossSpec: constants must be nonnegative");
  }
}

double LossSpec::Value(const Vec& x) const {
  if (x.size() != dimension_) throw InvalidInputError("LossSpec: dimension mismatch");
  return value_(x);
}

double LossSpec::Value1d(double x) const {
  if (scalar_value_) return scalar_value_(x);
  return Value(Vec::Constant(1, x));
}

Vec LossSpec::Subgradient(const Vec& x) const {
  if (x.size() != dimension_) throw InvalidInputError("LossSpec: dimension mismatch");
  return gradient_(x);
}

LossSpec& LossSpec::set_quadratic(IsotropicQuadratic q) {
  if (q.linear.size() != dimension_) {
    throw InvalidInputError("LossSpec: quadratic descriptor dimension");
  }
  quadratic_ = std::move(q);
  return *this;
}

LossSpec& LossSpec::set_scalar(ScalarFn value, ScalarFn derivative) {
  if (dimension_ != 1) throw InvalidInputError("scalar form needs d = 1");
  scalar_value_ = std::move(value);
  scalar_derivative_ = std::move(derivative);
  return *this;
}

LossSpec& LossSpec::set_knots(std::vector<double> knots) {
  knots_ = std::move(knots);
  return *this;
}

LossSpec& LossSpec::set_nsc_epsilon(double eps) {
  nsc_epsilon_ = eps;
  return *this;
}

LossSpec MakeIsotropicQuadraticLoss(double a, const Vec& b, double c0,
                                    const ConvexBody& domain) {
  if (b.size() != domain.dimension()) {
    throw InvalidInputError("quadratic loss: dimension mismatch");
  }
  if (!std::isfinite(a) || !std::isfinite(c0)) {
    throw InvalidInputError("quadratic loss: non-finite coefficient");
  }
  CheckFinite(b, "quadratic loss coefficient");
  double lipschitz;
  LossClass cls;
  if (a > 0) {
    lipschitz = a * domain.MaxDistanceFrom(-b / a);
    cls = LossClass::kScSmooth;
  } else if (a == 0) {
    lipschitz = b.norm();
    cls = LossClass::kLinear;
  } else {
    const Vec c = -b / a;
    lipschitz = -a * domain.MaxDistanceFrom(c);
    cls = LossClass::kConcave;
  }
  IsotropicQuadratic q{a, b, c0};
  LossSpec loss(
      static_cast<int>(b.size()), [q](const Vec& x) { return q.Value(x); },
      [a, b](const Vec& x) -> Vec { return a * x + b; }, cls, lipschitz,
      std::max(a, 0.0), std::abs(a));
  loss.set_quadratic(q);
  if (b.size() == 1) {
    const double b0 = b[0];
    loss.set_scalar([a, b0, c0](double x) { return 0.5 * a * x * x + b0 * x + c0; },
                    [a, b0](double x) { return a * x + b0; });
  }
  return loss;
}

LossSpec MakeQuadraticLoss(const Vec& center, double a, const ConvexBody& domain) {
  if (!(a > 0)) throw InvalidInputError("quadratic loss: curvature must be > 0");
  return MakeIsotropicQuadraticLoss(a, -a * center, 0.5 * a * center.squaredNorm(),
                                    domain);
}

LossSpec MakeLinearLoss(const Vec& c, const ConvexBody& domain) {
  return MakeIsotropicQuadraticLoss(0.0, c, 0.0, domain);
}

LossSpec MakeGeneralQuadraticLoss(const Mat& a, const Vec& b, double c0,
                                  const ConvexBody& domain) {
  const int d = domain.dimension();
  if (a.rows() != d || a.cols() != d || b.size() != d) {
    throw InvalidInputError("general quadratic: dimension mismatch");
  }
  if ((a - a.transpose()).norm() > 1e-12 * (1.0 + a.norm())) {
    throw InvalidInputError("general quadratic: matrix must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Mat> eig(a);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (lo < -1e-12) throw InvalidInputError("general quadratic: A must be PSD");
  double lipschitz = 0.0;
  if (domain.family() == BodyFamily::kBox) {
    for (const Vec& v : static_cast<const Box&>(domain).Corners()) {
      lipschitz = std::max(lipschitz, (a * v + b).norm());
    }
  } else if (domain.family() == BodyFamily::kPolytope) {
    for (const Vec& v : static_cast<const Polytope&>(domain).vertices()) {
      lipschitz = std::max(lipschitz, (a * v + b).norm());
    }
  } else {
    const auto& ball = static_cast<const Ball&>(domain);
    lipschitz = (a * ball.center() + b).norm() + hi * ball.radius();
  }
  const LossClass cls = lo > 0 ? LossClass::kScSmooth : LossClass::kSmooth;
  LossSpec loss(
      d, [a, b, c0](const Vec& x) { return 0.5 * x.dot(a * x) + b.dot(x) + c0; },
      [a, b](const Vec& x) -> Vec { return a * x + b; }, cls, lipschitz,
      std::max(lo, 0.0), hi);
  const double diag = a(0, 0);
  if ((a - diag * Mat::Identity(d, d)).norm() == 0.0) {
    loss.set_quadratic({diag, b, c0});
  }
  return loss;
}

LossSpec MakeCalibrationLoss(double b) {
  if (!(b >= 0.0 && b <= 1.0)) {
    throw InvalidInputError("calibration loss: outcome must lie in [0, 1]");
  }
  LossSpec loss(
      1, [b](const Vec& x) { return (x[0] - b) * (x[0] - b); },
      [b](const Vec& x) -> Vec { return Vec::Constant(1, 2.0 * (x[0] - b)); },
      LossClass::kScSmooth, 2.0, 2.0, 2.0);
  loss.set_quadratic({2.0, Vec::Constant(1, -2.0 * b), b * b});
  loss.set_scalar([b](double x) { return (x - b) * (x - b); },
                  [b](double x) { return 2.0 * (x - b); });
  return loss;
}

LossSpec PiecewiseLinearize(const LossSpec& loss, const Discretization& grid) {
  if (loss.dimension() != 1 || grid.dimension() != 1) {
    throw UnsupportedError("piecewise linearization is one-dimensional");
  }
  if (grid.size() < 2) throw InvalidInputError("linearization needs two knots");
  auto knots = std::make_shared<std::vector<double>>();
  for (const Vec& p : grid.points()) knots->push_back(p[0]);
  std::sort(knots->begin(), knots->end());
  auto values = std::make_shared<std::vector<double>>();
  double gap = 0.0;
  double max_slope = 0.0;
  for (size_t i = 0; i < knots->size(); ++i) {
    values->push_back(loss.Value1d((*knots)[i]));
    if (i > 0) {
      const double h = (*knots)[i] - (*knots)[i - 1];
      if (!(h > 0)) throw InvalidInputError("linearization: repeated knot");
      gap = std::max(gap, h);
      max_slope = std::max(max_slope,
                           std::abs(((*values)[i] - (*values)[i - 1]) / h));
    }
  }
  // Segment used at x: the one starting at the last knot <= x.
  auto segment = [knots](double x) {
    const auto& k = *knots;
    auto it = std::upper_bound(k.begin(), k.end(), x);
    int i = static_cast<int>(it - k.begin()) - 1;
    return std::clamp(i, 0, static_cast<int>(k.size()) - 2);
  };
  auto slope = [knots, values](int i) {
    return ((*values)[i + 1] - (*values)[i]) / ((*knots)[i + 1] - (*knots)[i]);
  };
  auto value = [knots, values, segment, slope](double x) {
    const int i = segment(x);
    return (*values)[i] + slope(i) * (x - (*knots)[i]);
  };
  auto derivative = [segment, slope](double x) { return slope(segment(x)); };
  LossSpec out(
      1, [value](const Vec& x) { return value(x[0]); },
      [derivative](const Vec& x) -> Vec {
        return Vec::Constant(1, derivative(x[0]));
      },
      LossClass::kNsc, max_slope, loss.alpha(), 0.0);
  out.set_scalar(value, derivative);
  out.set_knots(*knots);
  out.set_nsc_epsilon(gap);
  return out;
}

Vec SampleUniform(const ConvexBody& body, std::mt19937_64& rng) {
  auto [lo, hi] = body.BoundingBox();
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int tries = 0; tries < 10000; ++tries) {
    Vec x(lo.size());
    for (int i = 0; i < x.size(); ++i) x[i] = lo[i] + (hi[i] - lo[i]) * u(rng);
    if (body.Contains(x, 0.0)) return x;
  }
  Vec x(lo.size());
  for (int i = 0; i < x.size(); ++i) x[i] = lo[i] + (hi[i] - lo[i]) * u(rng);
  return body.Project(x);
}

NscCertificate CheckNsc(const LossSpec& loss, double alpha, double eps,
                        int trials, std::uint64_t seed, const ConvexBody& domain) {
  if (loss.dimension() != domain.dimension()) {
    throw InvalidInputError("CheckNsc: dimension mismatch");
  }
  if (!(alpha >= 0) || !(eps >= 0) || trials <= 0) {
    throw InvalidInputError("CheckNsc: bad parameters");
  }
  std::mt19937_64 rng = MakeRng(seed, 0x6e7363);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int d = domain.dimension();
  const auto& knots = loss.knots();
  NscCertificate cert;
  cert.alpha = alpha;
  cert.epsilon = eps;
  cert.worst_margin = std::numeric_limits<double>::infinity();

  auto random_direction = [&]() {
    std::normal_distribution<double> n(0.0, 1.0);
    Vec v(d);
    for (int i = 0; i < d; ++i) v[i] = n(rng);
    const double norm = v.norm();
    return norm > 0 ? Vec(v / norm) : Vec(Vec::Unit(d, 0));
  };
  auto random_knot = [&]() {
    const int i = static_cast<int>(u(rng) * knots.size()) %
                  static_cast<int>(knots.size());
    return Vec::Constant(1, knots[i]);
  };

  for (int t = 0; t < trials; ++t) {
    Vec x, y;
    const int mode = t % 3;
    if (mode == 1 && !knots.empty() && d == 1) {
      x = random_knot();
      y = u(rng) < 0.5 ? random_knot() : domain.Project(x + Vec::Constant(1, (u(rng) - 0.5) * 2 * eps));
    } else if (mode == 2) {
      x = SampleUniform(domain, rng);
      y = domain.Project(x + (eps * (1.0 + 0.2 * u(rng))) * random_direction());
    } else {
      x = SampleUniform(domain, rng);
      y = SampleUniform(domain, rng);
    }
    const double gap = loss.Value(y) - loss.Value(x) -
                       loss.Subgradient(x).dot(y - x);
    const double excess = std::max((y - x).norm() - eps, 0.0);
    const double margin = gap - 0.5 * alpha * excess * excess;
    ++cert.trials;
    if (margin < cert.worst_margin) {
      cert.worst_margin = margin;
      cert.worst_x = x;
      cert.worst_y = y;
    }
    if (margin < -1e-9) {
      ++cert.violations;
      cert.passed = false;
    }
  }
  return cert;
}

}  // namespace fullswap
