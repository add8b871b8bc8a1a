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
#include <cstdio>
#include <random>

#include "fullswap/geometry.h"
#include "fullswap/losses.h"

using namespace fullswap;

namespace {

double BruteNearestDistance(const Discretization& disc, const Vec& x) {
  double best = INFINITY;
  for (const Vec& p : disc.points()) best = std::min(best, (p - x).norm());
  return best;
}

Vec RandomIn(const ConvexBody& body, std::mt19937_64& rng) { return SampleUniform(body, rng); }

}  // namespace

TEST_CASE("box projection clamps coordinates") {
  auto box = MakeBox(Vec{{0.0, -1.0}}, Vec{{1.0, 2.0}});
  CHECK(box->Project(Vec{{1.5, -3.0}}).isApprox(Vec{{1.0, -1.0}}));
  CHECK(box->Contains(Vec{{0.5, 0.0}}));
  CHECK_FALSE(box->Contains(Vec{{0.5, 2.1}}));
  CHECK(box->DiameterBound() == doctest::Approx(std::sqrt(10.0)));
}

TEST_CASE("ball projection scales along the ray") {
  auto ball = MakeBall(Vec{{1.0, 1.0}}, 2.0);
  const Vec p = ball->Project(Vec{{1.0, 5.0}});
  CHECK(p[0] == doctest::Approx(1.0));
  CHECK(p[1] == doctest::Approx(3.0));
  CHECK(ball->MinimizeLinear(Vec{{1.0, 0.0}}).isApprox(Vec{{-1.0, 1.0}}));
}

TEST_CASE("polytope projection satisfies the obtuse-angle condition") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<Vec> vs;
  for (int i = 0; i < 7; ++i) vs.push_back(Vec{{n(rng), n(rng)}});
  auto poly = MakePolytope(vs);
  for (int trial = 0; trial < 200; ++trial) {
    const Vec x{{3 * n(rng), 3 * n(rng)}};
    const Vec z = poly->Project(x);
    for (const Vec& v : vs) CHECK((x - z).dot(v - z) <= 1e-9);
  }
}

TEST_CASE("min norm point meets its optimality condition") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 1 + trial % 3;
    std::vector<Vec> pts;
    for (int i = 0; i < 2 + trial % 6; ++i) {
      Vec p(d);
      for (int k = 0; k < d; ++k) p[k] = n(rng) + 1.5;
      pts.push_back(p);
    }
    const MinNormPointResult r = MinNormPoint(pts);
    Vec rebuilt = Vec::Zero(d);
    double total = 0.0;
    for (size_t i = 0; i < r.support.size(); ++i) {
      rebuilt += r.weights[i] * pts[r.support[i]];
      total += r.weights[i];
      CHECK(r.weights[i] >= -1e-12);
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    CHECK((rebuilt - r.point).norm() <= 1e-9);
    for (const Vec& p : pts) CHECK(r.point.dot(p - r.point) >= -1e-9);
  }
}

TEST_CASE("min norm point on a segment matches the closed form") {
  const Vec a{{1.0, 2.0}};
  const Vec b{{3.0, -1.0}};
  const double t = std::clamp(-a.dot(b - a) / (b - a).squaredNorm(), 0.0, 1.0);
  const Vec expected = a + t * (b - a);
  CHECK((MinNormPoint({a, b}).point - expected).norm() <= 1e-12);
}

TEST_CASE("barycentric weights reconstruct interior points") {
  const std::vector<Vec> tri = {Vec{{0.0, 0.0}}, Vec{{1.0, 0.0}}, Vec{{0.0, 1.0}}};
  const auto w = BarycentricWeights(Vec{{0.2, 0.3}}, tri);
  REQUIRE(w.size() == 3);
  CHECK(w[0] == doctest::Approx(0.5));
  CHECK(w[1] == doctest::Approx(0.2));
  CHECK(w[2] == doctest::Approx(0.3));
}

TEST_CASE("interval grid for eight rounds has three points") {
  const double eps = std::pow(8.0, -1.0 / 3.0);
  const Discretization g = BuildIntervalGrid(0.0, 1.0, eps);
  REQUIRE(g.size() == 3);
  CHECK(g.point(1)[0] == doctest::Approx(0.5));
  CHECK(g.is_sorted_chain());
  CHECK(g.simplices().size() == 2);
}

TEST_CASE("nets cover their body") {
  std::mt19937_64 rng(11);
  const std::vector<std::shared_ptr<const ConvexBody>> bodies = {
      MakeInterval(-1.0, 2.0), MakeUnitCube(2), MakeUnitBall(2), MakeUnitBall(3),
      MakePolytope({Vec{{0.0, 0.0}}, Vec{{1.0, 0.2}}, Vec{{0.3, 1.0}}})};
  for (const auto& body : bodies) {
    for (double eps : {0.3, 0.15}) {
      const Discretization net = BuildNet(*body, eps);
      for (const Vec& p : net.points()) CHECK(body->Contains(p, 1e-9));
      for (int trial = 0; trial < 300; ++trial) {
        const Vec x = RandomIn(*body, rng);
        const double brute = BruteNearestDistance(net, x);
        CHECK(brute <= eps + 1e-12);
        CHECK((net.point(net.NearestPoint(x)) - x).norm() == doctest::Approx(brute));
      }
    }
  }
}

TEST_CASE("box triangulation reconstructs every point") {
  std::mt19937_64 rng(13);
  for (int d = 1; d <= 3; ++d) {
    auto cube = MakeUnitCube(d);
    const double eps = 0.3;
    const Discretization tri = BuildTriangulation(*cube, eps);
    for (const auto& s : tri.simplices()) {
      for (int a : s) {
        for (int b : s) CHECK((tri.point(a) - tri.point(b)).norm() <= eps + 1e-12);
      }
    }
    for (int trial = 0; trial < 300; ++trial) {
      const Vec x = RandomIn(*cube, rng);
      const SimplexHit hit = tri.LocateSimplex(x);
      Vec rebuilt = Vec::Zero(d);
      for (size_t i = 0; i < hit.vertices.size(); ++i) {
        rebuilt += hit.weights[i] * tri.point(hit.vertices[i]);
      }
      CHECK((rebuilt - x).norm() <= 1e-9);
    }
  }
}

TEST_CASE("ball triangulation stays within eps squared") {
  std::mt19937_64 rng(17);
  for (int d = 2; d <= 3; ++d) {
    auto ball = MakeUnitBall(d);
    const double eps = 0.35;
    const Discretization tri = BuildTriangulation(*ball, eps);
    for (const Vec& p : tri.points()) CHECK(ball->Contains(p, 1e-9));
    for (int trial = 0; trial < 200; ++trial) {
      const Vec x = RandomIn(*ball, rng);
      const SimplexHit hit = tri.LocateSimplex(x);
      CHECK(hit.distance <= eps * eps + 1e-9);
    }
  }
}

TEST_CASE("triangulating a polytope is unsupported") {
  auto poly = MakePolytope({Vec{{0.0, 0.0}}, Vec{{1.0, 0.0}}, Vec{{0.0, 1.0}}});
  CHECK_THROWS_AS(BuildTriangulation(*poly, 0.2), UnsupportedBodyError);
}

TEST_CASE("far queries are rejected by the located simplex guard") {
  const Discretization g = BuildIntervalGrid(0.0, 1.0, 0.25);
  CHECK_THROWS_AS(g.LocateSimplex(Vec::Constant(1, 1.5)), GeometryError);
  CHECK(g.NearestSimplex(Vec::Constant(1, 1.5)).nearest[0] == doctest::Approx(1.0));
}

TEST_CASE("boundary polytope of a disk is within eps squared") {
  auto disk = MakeUnitBall(2);
  const double eps = 0.2;
  const Discretization bp = BuildBoundaryPolytope(*disk, eps);
  for (int k = 0; k < 720; ++k) {
    const double a = 2 * M_PI * k / 720.0;
    const Vec u{{std::cos(a), std::sin(a)}};
    double support = -INFINITY;
    for (const Vec& p : bp.points()) support = std::max(support, u.dot(p));
    CHECK(1.0 - support <= eps * eps + 1e-12);
  }
}

TEST_CASE("boundary polytope of a box is its corners") {
  auto cube = MakeUnitCube(3);
  CHECK(BuildBoundaryPolytope(*cube, 0.1).size() == 8);
}

TEST_CASE("discretizations survive a JSON round trip") {
  const Discretization tri = BuildTriangulation(*MakeUnitCube(2), 0.5);
  const Discretization back = DiscretizationFromJson(ToJson(tri));
  CHECK(back.kind() == tri.kind());
  CHECK(back.epsilon() == tri.epsilon());
  REQUIRE(back.size() == tri.size());
  for (int i = 0; i < tri.size(); ++i) CHECK(back.point(i) == tri.point(i));
  CHECK(back.simplices() == tri.simplices());
  const std::string path = "geometry_test_disc.json";
  SaveDiscretization(tri, path);
  CHECK(LoadDiscretization(path).size() == tri.size());
  std::remove(path.c_str());
  CHECK_THROWS_AS(DiscretizationFromJson(nlohmann::json{{"kind", "net"}}), InvalidInputError);
}

TEST_CASE("bodies parse from JSON") {
  auto b = BodyFromJson(nlohmann::json{{"type", "ball"}, {"center", {0, 0}}, {"radius", 2}});
  CHECK(b->family() == BodyFamily::kBall);
  CHECK(b->DiameterBound() == doctest::Approx(4.0));
  CHECK_THROWS(BodyFromJson(nlohmann::json{{"type", "torus"}}));
}
