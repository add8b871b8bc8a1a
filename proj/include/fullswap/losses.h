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

#ifndef FULLSWAP_LOSSES_H_
#define FULLSWAP_LOSSES_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fullswap/common.h"
#include "fullswap/geometry.h"

namespace fullswap {

// Regularity classes. kConvex is plain convex Lipschitz; kNsc marks losses
// that are strongly convex only at distances above a scale eps.
enum class LossClass {
  kGeneral,
  kConvex,
  kConcave,
  kLinear,
  kSmooth,
  kStronglyConvex,
  kScSmooth,
  kNsc,
};

std::string ToString(LossClass c);
LossClass LossClassFromString(const std::string& s);

// (curvature / 2) |x|^2 + <linear, x> + constant. Sums of these stay in the
// family, which gives closed-form comparators.
struct IsotropicQuadratic {
  double curvature = 0.0;
  Vec linear;
  double constant = 0.0;

  double Value(const Vec& x) const {
    return 0.5 * curvature * x.squaredNorm() + linear.dot(x) + constant;
  }
};

// A loss on R^d with declared regularity constants. Value and Subgradient
// are the ground truth; the optional fields are exact alternative
// descriptions used for fast paths and closed forms.
class LossSpec {
 public:
  using ValueFn = std::function<double(const Vec&)>;
  using GradientFn = std::function<Vec(const Vec&)>;
  using ScalarFn = std::function<double(double)>;

  LossSpec() = default;
  LossSpec(int dimension, ValueFn value, GradientFn gradient, LossClass cls,
           double lipschitz, double alpha = 0.0, double beta = 0.0);

  double Value(const Vec& x) const;
  // Avoids a heap allocation for 1D losses that carry a scalar form.
  double Value1d(double x) const;
  Vec Subgradient(const Vec& x) const;

  int dimension() const { return dimension_; }
  LossClass loss_class() const { return class_; }
  double lipschitz() const { return lipschitz_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  double nsc_epsilon() const { return nsc_epsilon_; }
  const std::optional<IsotropicQuadratic>& quadratic() const { return quadratic_; }
  // Breakpoints of a 1D piecewise-linear loss, sorted; empty otherwise.
  const std::vector<double>& knots() const { return knots_; }
  bool has_scalar() const { return static_cast<bool>(scalar_value_); }

  LossSpec& set_quadratic(IsotropicQuadratic q);
  LossSpec& set_scalar(ScalarFn value, ScalarFn derivative);
  LossSpec& set_knots(std::vector<double> knots);
  LossSpec& set_nsc_epsilon(double eps);

 private:
  int dimension_ = 0;
  ValueFn value_;
  GradientFn gradient_;
  ScalarFn scalar_value_;
  ScalarFn scalar_derivative_;
  LossClass class_ = LossClass::kGeneral;
  double lipschitz_ = 0.0;
  double alpha_ = 0.0;
  double beta_ = 0.0;
  double nsc_epsilon_ = 0.0;
  std::optional<IsotropicQuadratic> quadratic_;
  std::vector<double> knots_;
};

// a/2 |x|^2 + <b, x> + c0 with L taken as the gradient bound over `domain`.
LossSpec MakeIsotropicQuadraticLoss(double a, const Vec& b, double c0,
                                    const ConvexBody& domain);
// (a/2) |x - center|^2.
LossSpec MakeQuadraticLoss(const Vec& center, double a, const ConvexBody& domain);
// <c, x>.
LossSpec MakeLinearLoss(const Vec& c, const ConvexBody& domain);
// x^T A x / 2 + <b, x> + c0 with symmetric PSD A.
LossSpec MakeGeneralQuadraticLoss(const Mat& a, const Vec& b, double c0,
                                  const ConvexBody& domain);
// The squared-error loss (x - b)^2 on [0, 1].
LossSpec MakeCalibrationLoss(double b);

// Linear interpolation of a 1D loss between consecutive points of `grid`,
// extended linearly beyond the end knots. Agrees with the loss at every knot.
// The subgradient at a knot is the slope of the segment to its right (the
// last segment at the right end).
LossSpec PiecewiseLinearize(const LossSpec& loss, const Discretization& grid);

struct NscCertificate {
  bool passed = true;
  int trials = 0;
  int violations = 0;
  double alpha = 0.0;
  double epsilon = 0.0;
  // Smallest value of the gap minus the required curvature term.
  double worst_margin = 0.0;
  Vec worst_x;
  Vec worst_y;
};

// Randomized check of
//   l(y) - l(x) - <g(x), y - x> >= (alpha / 2) (|y - x| - eps)_+^2 - 1e-9
// on pairs drawn uniformly from `domain`, from knot pairs, and at distances
// just above eps.
NscCertificate CheckNsc(const LossSpec& loss, double alpha, double eps,
                        int trials, std::uint64_t seed, const ConvexBody& domain);

// Uniform sample by rejection from the bounding box.
Vec SampleUniform(const ConvexBody& body, std::mt19937_64& rng);

}  // namespace fullswap

#endif  // FULLSWAP_LOSSES_H_
