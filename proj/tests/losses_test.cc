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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "fullswap/geometry.h"
#include "fullswap/losses.h"

using namespace fullswap;

TEST_CASE("loss class names round trip") {
  for (LossClass c : {LossClass::kGeneral, LossClass::kConvex, LossClass::kConcave,
                      LossClass::kLinear, LossClass::kSmooth, LossClass::kStronglyConvex,
                      LossClass::kScSmooth, LossClass::kNsc}) {
    CHECK(LossClassFromString(ToString(c)) == c);
  }
  CHECK(LossClassFromString("concave-or-linear") == LossClass::kConcave);
  CHECK_THROWS_AS(LossClassFromString("wiggly"), ConfigurationError);
}

TEST_CASE("calibration loss is the squared error") {
  for (int b : {0, 1}) {
    const LossSpec l = MakeCalibrationLoss(b);
    for (double x : {0.0, 0.25, 0.7, 1.0}) {
      CHECK(l.Value1d(x) == doctest::Approx((x - b) * (x - b)));
      CHECK(l.Value(Vec::Constant(1, x)) == doctest::Approx((x - b) * (x - b)));
      CHECK(l.Subgradient(Vec::Constant(1, x))[0] == doctest::Approx(2 * (x - b)));
      REQUIRE(l.quadratic());
      CHECK(l.quadratic()->Value(Vec::Constant(1, x)) == doctest::Approx((x - b) * (x - b)));
    }
    CHECK(l.alpha() == 2.0);
    CHECK(l.lipschitz() == 2.0);
  }
}

TEST_CASE("isotropic quadratic class follows the curvature sign") {
  auto box = MakeUnitCube(2);
  const Vec b{{0.3, -0.1}};
  CHECK(MakeIsotropicQuadraticLoss(1.0, b, 0.0, *box).loss_class() == LossClass::kScSmooth);
  CHECK(MakeIsotropicQuadraticLoss(0.0, b, 0.0, *box).loss_class() == LossClass::kLinear);
  CHECK(MakeIsotropicQuadraticLoss(-1.0, b, 0.0, *box).loss_class() == LossClass::kConcave);
}

TEST_CASE("declared Lipschitz constants hold on the domain") {
  std::mt19937_64 rng(1);
  for (const auto& body : {MakeUnitCube(2), MakeUnitBall(2)}) {
    for (int trial = 0; trial < 20; ++trial) {
      const Vec center = 2.0 * SampleUniform(*MakeUnitBall(2), rng);
      const LossSpec l = MakeQuadraticLoss(center, 1.0 + trial % 3, *body);
      for (int k = 0; k < 50; ++k) {
        const Vec x = SampleUniform(*body, rng);
        const Vec y = SampleUniform(*body, rng);
        CHECK(std::abs(l.Value(x) - l.Value(y)) <= l.lipschitz() * (x - y).norm() + 1e-12);
        CHECK(l.Subgradient(x).norm() <= l.lipschitz() + 1e-12);
      }
    }
  }
}

TEST_CASE("gradients match central differences") {
  auto box = MakeUnitCube(2);
  Mat a(2, 2);
  a << 2.0, 0.5, 0.5, 1.0;
  const LossSpec l = MakeGeneralQuadraticLoss(a, Vec{{0.1, -0.4}}, 0.3, *box);
  CHECK(l.alpha() == doctest::Approx(1.5 - std::sqrt(0.5)));
  CHECK(l.beta() == doctest::Approx(1.5 + std::sqrt(0.5)));
  CHECK_FALSE(l.quadratic());
  const Vec x{{0.3, 0.6}};
  const double h = 1e-6;
  for (int i = 0; i < 2; ++i) {
    const Vec e = Vec::Unit(2, i) * h;
    const double fd = (l.Value(x + e) - l.Value(x - e)) / (2 * h);
    CHECK(l.Subgradient(x)[i] == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("indefinite matrices are rejected") {
  auto box = MakeUnitCube(2);
  Mat a(2, 2);
  a << 1.0, 0.0, 0.0, -1.0;
  CHECK_THROWS_AS(MakeGeneralQuadraticLoss(a, Vec::Zero(2), 0.0, *box), InvalidInputError);
}

TEST_CASE("linearization interpolates at knots and overestimates in between") {
  const Discretization grid = BuildIntervalGrid(0.0, 1.0, 0.2);
  const LossSpec l = MakeCalibrationLoss(1);
  const LossSpec flat = PiecewiseLinearize(l, grid);
  CHECK(flat.loss_class() == LossClass::kNsc);
  CHECK(flat.nsc_epsilon() == doctest::Approx(0.2));
  for (const Vec& k : grid.points()) CHECK(flat.Value(k) == doctest::Approx(l.Value(k)));
  for (int i = 0; i <= 1000; ++i) {
    const double x = i / 1000.0;
    const double gap = flat.Value1d(x) - l.Value1d(x);
    CHECK(gap >= -1e-12);
    // Interpolation error of a quadratic with second derivative 2.
    CHECK(gap <= 2.0 * 0.2 * 0.2 / 8.0 + 1e-12);
  }
}

TEST_CASE("linearized strongly convex losses pass the near-strong-convexity check") {
  const Discretization grid = BuildIntervalGrid(0.0, 1.0, 0.1);
  auto unit = MakeInterval(0.0, 1.0);
  for (double b : {0.0, 0.33, 1.0}) {
    const LossSpec flat = PiecewiseLinearize(MakeCalibrationLoss(b), grid);
    const NscCertificate cert = CheckNsc(flat, 2.0, 0.1, 3000, 9, *unit);
    CHECK(cert.passed);
    CHECK(cert.trials == 3000);
  }
}

TEST_CASE("the check rejects a linearization at too small a gap") {
  const Discretization grid = BuildIntervalGrid(0.0, 1.0, 0.25);
  auto unit = MakeInterval(0.0, 1.0);
  const LossSpec flat = PiecewiseLinearize(MakeCalibrationLoss(0.5), grid);
  const NscCertificate cert = CheckNsc(flat, 2.0, 0.0, 3000, 9, *unit);
  CHECK_FALSE(cert.passed);
  CHECK(cert.violations > 0);
  CHECK(cert.worst_margin < 0);
}

TEST_CASE("linearization is one-dimensional") {
  const Discretization net = BuildNet(*MakeUnitCube(2), 0.5);
  CHECK_THROWS_AS(PiecewiseLinearize(MakeQuadraticLoss(Vec::Zero(2), 1.0, *MakeUnitCube(2)), net),
                  UnsupportedError);
}

TEST_CASE("uniform samples stay in the body") {
  std::mt19937_64 rng(4);
  auto poly = MakePolytope({Vec{{0.0, 0.0}}, Vec{{2.0, 0.0}}, Vec{{0.0, 1.0}}});
  Vec mean = Vec::Zero(2);
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const Vec x = SampleUniform(*poly, rng);
    CHECK(poly->Contains(x));
    mean += x / n;
  }
  // Centroid of the triangle.
  CHECK(mean[0] == doctest::Approx(2.0 / 3.0).epsilon(0.02));
  CHECK(mean[1] == doctest::Approx(1.0 / 3.0).epsilon(0.02));
}
