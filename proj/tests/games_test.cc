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
#include <fstream>
#include <random>

#include "fullswap/games.h"
#include "fullswap/harness.h"

using namespace fullswap;

namespace {

// max over all n^n swap functions, enumerated.
double BruteSwapRegret(const GameTranscript& tr, const StructuredGame& g) {
  const int n = g.learner_actions();
  const Mat u = g.LearnerPayoff();
  std::vector<int> phi(n, 0);
  double best = -INFINITY;
  while (true) {
    double gain = 0.0;
    for (int t = 0; t < tr.rounds(); ++t) {
      const Vec col = u * tr.q[t];
      for (int i = 0; i < n; ++i) gain += tr.p[t][i] * (col[phi[i]] - col[i]);
    }
    best = std::max(best, gain);
    int k = 0;
    while (k < n && ++phi[k] == n) phi[k++] = 0;
    if (k == n) break;
  }
  return best;
}

Vec RandomSimplex(int n, std::mt19937_64& rng) {
  std::exponential_distribution<double> e(1.0);
  Vec p(n);
  for (int i = 0; i < n; ++i) p[i] = e(rng);
  return p / p.sum();
}

StructuredGame MatchingPennies() {
  Mat u(2, 2);
  u << 1, -1, -1, 1;
  return NfgToStructured(u, -u);
}

}  // namespace

TEST_CASE("embedding examples") {
  const std::vector<Vec> cal = {CalibrationLearnerEmbedding(0.0),
                                CalibrationLearnerEmbedding(0.5)};
  CHECK(Embed(Vec{{0.0, 1.0}}, cal).isApprox(Vec{{0.0, -0.25}}));
  const std::vector<Vec> twins = {Vec{{0.3, 0.4}}, Vec{{0.3, 0.4}}};
  CHECK(Embed(Vec{{0.5, 0.5}}, twins).isApprox(Vec{{0.3, 0.4}}));
  const std::vector<Vec> three = {Vec{{1.0, 0.0}}, Vec{{0.0, 1.0}}, Vec{{0.5, 0.5}}};
  CHECK(Embed(Vec::Unit(3, 2), three) == three[2]);
  CHECK_THROWS_AS(Embed(Vec{{1.0}}, three), InvalidInputError);
}

TEST_CASE("convex decomposition examples") {
  const std::vector<Vec> seg = {Vec::Constant(1, 0.0), Vec::Constant(1, 1.0)};
  const Vec half = ConvexDecompose(Vec::Constant(1, 0.5), seg);
  CHECK(half[0] == doctest::Approx(0.5));
  CHECK(half[1] == doctest::Approx(0.5));
  const std::vector<Vec> square = {Vec{{0.0, 0.0}}, Vec{{1.0, 0.0}}, Vec{{0.0, 1.0}},
                                   Vec{{1.0, 1.0}}};
  CHECK(ConvexDecompose(square[3], square).isApprox(Vec::Unit(4, 3)));
  const Vec mid = ConvexDecompose(Vec{{0.5, 0.5}}, square);
  CHECK((mid.array() > 0).count() <= 3);
  CHECK((Embed(mid, square) - Vec{{0.5, 0.5}}).norm() <= 1e-9);
}

TEST_CASE("points outside the hull come with a separating certificate") {
  const std::vector<Vec> tri = {Vec{{0.0, 0.0}}, Vec{{1.0, 0.0}}, Vec{{0.0, 1.0}}};
  const Vec x{{1.0, 1.0}};
  try {
    ConvexDecompose(x, tri);
    FAIL("expected an infeasibility error");
  } catch (const InfeasibleError& e) {
    const Vec c = e.certificate();
    for (const Vec& v : tri) CHECK(c.dot(v) > c.dot(x));
  }
}

TEST_CASE("decomposition round trips with small support") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 1 + trial % 3;
    const int n = d + 2 + trial % 7;
    std::vector<Vec> vs;
    auto ball = MakeUnitBall(d);
    for (int i = 0; i < n; ++i) vs.push_back(SampleUniform(*ball, rng));
    const Vec x = Embed(RandomSimplex(n, rng), vs);
    const Vec lambda = ConvexDecompose(x, vs);
    CHECK((Embed(lambda, vs) - x).norm() <= 1e-9);
    CHECK((lambda.array() > 0).count() <= d + 1);
    CHECK(lambda.minCoeff() >= 0.0);
    CHECK(lambda.sum() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("decomposition is deterministic") {
  const std::vector<Vec> square = {Vec{{0.0, 0.0}}, Vec{{1.0, 0.0}}, Vec{{0.0, 1.0}},
                                   Vec{{1.0, 1.0}}, Vec{{0.5, 0.5}}};
  CHECK(ConvexDecompose(Vec{{0.3, 0.6}}, square) == ConvexDecompose(Vec{{0.3, 0.6}}, square));
}

TEST_CASE("normal-form games become structured games") {
  const StructuredGame mp = MatchingPennies();
  CHECK(mp.dimension() == 2);
  Mat u(2, 2);
  u << 1, -1, -1, 1;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      CHECK(std::abs(mp.LearnerUtility(i, j) - mp.learner_scale * u(i, j)) <= 1e-12);
      CHECK(std::abs(mp.AdversaryUtility(i, j) + mp.adversary_scale * u(i, j)) <= 1e-12);
    }
  }
  CHECK_NOTHROW(mp.Validate());
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nrm(0.0, 3.0);
  for (auto [n, m] : {std::pair{1, 4}, std::pair{5, 3}, std::pair{4, 4}}) {
    Mat a(n, m), b(n, m);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < m; ++j) {
        a(i, j) = nrm(rng);
        b(i, j) = nrm(rng);
      }
    }
    const StructuredGame g = NfgToStructured(a, b);
    CHECK(g.dimension() == std::min(n, m));
    CHECK_NOTHROW(g.Validate());
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < m; ++j) {
        CHECK(std::abs(g.LearnerUtility(i, j) - g.learner_scale * a(i, j)) <= 1e-12);
        CHECK(std::abs(g.AdversaryUtility(i, j) - g.adversary_scale * b(i, j)) <= 1e-12);
      }
    }
  }
}

TEST_CASE("swap regret closed forms") {
  const StructuredGame mp = MatchingPennies();
  GameTranscript tr;
  for (int t = 0; t < 5; ++t) {
    tr.p.push_back(Vec::Unit(2, 0));
    tr.q.push_back(Vec::Unit(2, 0));
  }
  CHECK(SwapRegret(tr, mp) == doctest::Approx(0.0));
  GameTranscript bad;
  for (int t = 0; t < 5; ++t) {
    bad.p.push_back(Vec::Unit(2, 1));
    bad.q.push_back(Vec::Unit(2, 0));
  }
  CHECK(SwapRegret(bad, mp) == doctest::Approx(5 * (1.0 - (-1.0)) * mp.learner_scale));
}

TEST_CASE("swap regret matches enumeration over swap functions") {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 3;
    const StructuredGame g = RandomStructuredGame(n, 2, trial);
    GameTranscript tr;
    for (int t = 0; t < 10; ++t) {
      tr.p.push_back(RandomSimplex(n, rng));
      tr.q.push_back(RandomSimplex(n, rng));
    }
    CHECK(std::abs(SwapRegret(tr, g) - BruteSwapRegret(tr, g)) <= 1e-12);
  }
}

TEST_CASE("correlated equilibrium gaps") {
  const StructuredGame mp = MatchingPennies();
  const Vec half = Vec::Constant(2, 0.5);
  const Mat nash = half * half.transpose();
  const auto [a, b] = CorrelatedEqGap(nash, mp);
  CHECK(a == doctest::Approx(0.0));
  CHECK(b == doctest::Approx(0.0));
  Mat point = Mat::Zero(2, 2);
  point(1, 0) = 1.0;
  const auto [gl, ga] = CorrelatedEqGap(point, mp);
  CHECK(gl == doctest::Approx(2.0 * mp.learner_scale));
  CHECK(ga == doctest::Approx(0.0));
}

TEST_CASE("product joint gaps equal average swap regret") {
  std::mt19937_64 rng(2);
  const StructuredGame g = RandomStructuredGame(4, 2, 9);
  GameTranscript tr;
  for (int t = 0; t < 30; ++t) {
    tr.p.push_back(RandomSimplex(4, rng));
    tr.q.push_back(RandomSimplex(4, rng));
  }
  const auto [gl, ga] = CorrelatedEqGap(EmpiricalJoint(tr), g);
  CHECK(gl == doctest::Approx(SwapRegret(tr, g) / 30.0));
  CHECK(ga == doctest::Approx(AdversarySwapRegret(tr, g) / 30.0));
}

TEST_CASE("reduction keeps swap regret below full swap regret") {
  const StructuredGame g = RandomStructuredGame(3, 3, 4);
  StructuredLearner learner = MakeStructuredLearner(g.v, 500);
  auto adversary = MakeGameAdversary("linear-random", 4);
  GameTranscript tr;
  for (int t = 0; t < 500; ++t) {
    const Vec p = learner.NextStrategy();
    const Vec q = adversary->Next(p, g);
    learner.Observe(Embed(q, g.w));
    tr.p.push_back(p);
    tr.q.push_back(q);
    CHECK((Embed(p, g.v) - learner.plays().back().Mean(learner.engine().discretization()))
              .norm() <= 1e-9);
  }
  const double fsr = FullSwapRegret(learner.plays(), learner.losses(),
                                    learner.engine().discretization().points(), learner.body());
  CHECK(SwapRegret(tr, g) <= fsr + 1e-6);
}

TEST_CASE("one round swap regret is the best single deviation") {
  const StructuredGame g = RandomStructuredGame(3, 2, 1);
  StructuredLearner learner = MakeStructuredLearner(g.v, 1);
  GameTranscript tr;
  tr.p.push_back(learner.NextStrategy());
  tr.q.push_back(Vec::Unit(3, 1));
  const Vec col = g.LearnerPayoff() * tr.q[0];
  double expected = 0.0;
  for (int i = 0; i < 3; ++i) expected += tr.p[0][i] * (col.maxCoeff() - col[i]);
  CHECK(SwapRegret(tr, g) == doctest::Approx(expected));
}

TEST_CASE("games survive JSON and CSV input") {
  const StructuredGame g = RandomStructuredGame(3, 2, 5);
  const StructuredGame back = StructuredGame::FromJson(g.ToJson());
  CHECK(back.LearnerPayoff().isApprox(g.LearnerPayoff()));
  CHECK(back.AdversaryPayoff().isApprox(g.AdversaryPayoff()));
  nlohmann::json big = g.ToJson();
  big["v"][0] = {2.0, 0.0};
  CHECK_THROWS_AS(StructuredGame::FromJson(big), InvalidInputError);
  const std::string path = "games_test_matrix.csv";
  {
    std::ofstream out(path);
    out << "1,2,3\n4,5,6\n";
  }
  const Mat m = ReadCsvMatrix(path);
  CHECK(m.rows() == 2);
  CHECK(m(1, 2) == 6.0);
  std::remove(path.c_str());
}

TEST_CASE("transcripts with bad strategies are rejected") {
  const StructuredGame g = RandomStructuredGame(2, 2, 5);
  GameTranscript tr;
  tr.p.push_back(Vec{{0.7, 0.7}});
  tr.q.push_back(Vec{{0.5, 0.5}});
  CHECK_THROWS_AS(SwapRegret(tr, g), InvalidInputError);
}
