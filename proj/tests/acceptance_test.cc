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

// Acceptance checks. Prints one PASS or FAIL line per criterion and exits
// nonzero if any criterion fails. Runtime budgets are part of each check.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "fullswap/calibration.h"
#include "fullswap/games.h"
#include "fullswap/geometry.h"
#include "fullswap/harness.h"
#include "fullswap/losses.h"
#include "fullswap/oco.h"
#include "fullswap/swap_engine.h"

using namespace fullswap;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string Fmt(const char* format, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), format, a, b, c, d);
  return buf;
}

Vec RandomSimplex(int n, std::mt19937_64& rng) {
  std::exponential_distribution<double> e(1.0);
  Vec p(n);
  for (int i = 0; i < n; ++i) p[i] = e(rng);
  return p / p.sum();
}

// Criterion 1: calibration error equals full swap regret under squared loss.
Outcome CalibrationIdentity() {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto interval = MakeInterval(0.0, 1.0);
  EvaluatorOptions closed, grid;
  closed.method = InnerMinMethod::kClosedForm;
  grid.method = InnerMinMethod::kGridSearch;
  double worst_closed = 0.0, worst_grid = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int T = 1 + static_cast<int>(unit(rng) * 200);
    const int draws = 1 + static_cast<int>(unit(rng) * 20);
    // Odd trials draw from the tenths, so forecasts often hit the endpoints.
    std::vector<double> values;
    for (int i = 0; i < draws; ++i) {
      values.push_back(trial % 2 ? std::round(unit(rng) * 10) / 10 : unit(rng));
    }
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    const int k = static_cast<int>(values.size());
    std::vector<Vec> pool;
    for (double v : values) pool.push_back(Vec::Constant(1, v));
    CalibrationTranscript tr;
    std::vector<MixedAction> plays;
    std::vector<LossSpec> losses;
    for (int t = 0; t < T; ++t) {
      const int m = 1 + static_cast<int>(unit(rng) * std::min(k, 3));
      std::vector<int> idx(k);
      for (int i = 0; i < k; ++i) idx[i] = i;
      std::shuffle(idx.begin(), idx.end(), rng);
      idx.resize(m);
      std::sort(idx.begin(), idx.end());
      const Vec w = RandomSimplex(m, rng);
      MixedAction play;
      Forecast f;
      for (int j = 0; j < m; ++j) {
        play.support.push_back(idx[j]);
        play.probs.push_back(w[j]);
        f.values.push_back(pool[idx[j]][0]);
        f.probs.push_back(w[j]);
      }
      const int b = unit(rng) < 0.3 + 0.4 * (trial % 3) / 2.0;
      tr.Add(f, b);
      plays.push_back(play);
      losses.push_back(MakeCalibrationLoss(b));
    }
    const double cal = L2CalibrationError(tr);
    worst_closed = std::max(
        worst_closed, std::abs(cal - FullSwapRegret(plays, losses, pool, *interval, closed)));
    worst_grid = std::max(
        worst_grid, std::abs(cal - FullSwapRegret(plays, losses, pool, *interval, grid)));
  }
  return {worst_closed <= 1e-9 && worst_grid <= 1e-9,
          Fmt("max |Cal - FSR| closed form %.2e, grid search %.2e", worst_closed, worst_grid)};
}

// Criterion 2: interval rounding is lossless for the piecewise linearization.
Outcome LosslessIntervalRounding() {
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const double lo = -1.0 + unit(rng);
    const double hi = lo + 0.2 + 1.8 * unit(rng);
    auto body = MakeInterval(lo, hi);
    Discretization grid = [&] {
      if (trial % 2 == 0) return BuildIntervalGrid(lo, hi, 0.02 + 0.3 * unit(rng));
      // Irregular knots.
      const int n = 2 + static_cast<int>(unit(rng) * 30);
      std::vector<double> xs = {lo, hi};
      for (int i = 0; i < n - 2; ++i) xs.push_back(lo + (hi - lo) * unit(rng));
      std::sort(xs.begin(), xs.end());
      xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
      std::vector<Vec> pts;
      std::vector<std::vector<int>> simplices;
      double gap = 0.0;
      for (size_t i = 0; i < xs.size(); ++i) {
        pts.push_back(Vec::Constant(1, xs[i]));
        if (i > 0) {
          simplices.push_back({int(i) - 1, int(i)});
          gap = std::max(gap, xs[i] - xs[i - 1]);
        }
      }
      return Discretization(DiscretizationKind::kTriangulation, gap, pts, simplices);
    }();
    const double a = 4.0 * unit(rng);
    const LossSpec loss = trial % 3 == 0
                              ? MakeIsotropicQuadraticLoss(a, Vec::Constant(1, 2.0 * unit(rng) - 1.0),
                                                           unit(rng), *body)
                              : MakeQuadraticLoss(Vec::Constant(1, lo + (hi - lo) * (1.5 * unit(rng) - 0.25)),
                                                  a, *body);
    const LossSpec flat = PiecewiseLinearize(loss, grid);
    for (int q = 0; q < 5; ++q) {
      const double x = q == 0 ? grid.point(static_cast<int>(unit(rng) * grid.size()))[0]
                              : lo + (hi - lo) * unit(rng);
      const MixedAction h = RoundInterval(x, grid).action;
      double expected = 0.0;
      for (size_t i = 0; i < h.support.size(); ++i) {
        expected += h.probs[i] * loss.Value(grid.point(h.support[i]));
      }
      worst = std::max(worst, std::abs(flat.Value(Vec::Constant(1, x)) - expected));
    }
  }
  return {worst <= 1e-12, Fmt("max gap %.2e over 5000 queries", worst)};
}

// Criterion 3: prefix regret of scaled descent stays within its envelope.
Outcome DescentEnvelopes() {
  // The envelope formulas, written out independently of the library.
  auto gds = [](const ScheduleParams& p, double g) {
    return p.lipschitz * p.lipschitz / (2 * p.alpha) * (std::log(g + 1) + 1);
  };
  auto gdk = [](const ScheduleParams& p, double g) {
    return 2 * std::sqrt(2.0) * p.epsilon * p.lipschitz * std::sqrt(g) +
           p.lipschitz * p.lipschitz / p.alpha * (std::log(g + 1) + 1);
  };
  auto convex = [](const ScheduleParams& p, double g) {
    return p.lipschitz * std::sqrt(2 * g);
  };
  std::string detail;
  bool pass = true;
  for (StepSchedule schedule : {StepSchedule::kGds, StepSchedule::kGdk, StepSchedule::kConvex}) {
    double worst = -INFINITY;
    double formula_gap = 0.0;
    for (int run = 0; run < 50; ++run) {
      OcoCase c;
      c.schedule = schedule;
      c.pattern = run % kOcoPatterns;
      // The convex envelope is stated for unit diameter, so that schedule
      // stays on [0, 1].
      c.dimension = schedule == StepSchedule::kConvex ? 1 : 1 + (run / kOcoPatterns) % 2;
      c.seed = 3000 + run;
      c.horizon = 10000;
      const OcoRun r = RunOcoCase(c);
      for (double g : {0.5, 1.0, 17.0, 5000.0}) {
        const double mine = schedule == StepSchedule::kGds ? gds(r.params, g)
                            : schedule == StepSchedule::kGdk ? gdk(r.params, g)
                                                             : convex(r.params, g);
        formula_gap = std::max(formula_gap, std::abs(mine - RegretEnvelope(schedule, r.params, g)) /
                                                mine);
      }
      if (schedule == StepSchedule::kConvex && r.params.diameter != 1.0) formula_gap = INFINITY;
      for (size_t t = 0; t < r.prefix_regret.size(); ++t) {
        worst = std::max(worst, r.prefix_regret[t] - r.prefix_bound[t]);
      }
    }
    pass = pass && worst <= 1e-6 && formula_gap <= 1e-12;
    const char* name = schedule == StepSchedule::kGds   ? "gds"
                       : schedule == StepSchedule::kGdk ? "gdk"
                                                        : "convex";
    detail += name + Fmt(" worst regret - bound %.3g, formula mismatch %.1e; ", worst, formula_gap);
  }
  return {pass, detail};
}

// Criterion 4: rounding error envelopes for nets and triangulations.
Outcome RoundingEnvelopes() {
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  struct Setting {
    std::shared_ptr<const ConvexBody> body;
    Discretization disc;
    bool barycentric;
  };
  std::vector<Setting> settings;
  const std::vector<std::shared_ptr<const ConvexBody>> bodies = {
      MakeInterval(0.0, 1.0), MakeUnitCube(2), MakeUnitBall(2), MakeInterval(-1.0, 2.0)};
  for (const auto& body : bodies) {
    for (double eps : {0.08, 0.15, 0.3, 0.5}) {
      settings.push_back({body, BuildNet(*body, eps), false});
      settings.push_back({body, BuildTriangulation(*body, eps), true});
    }
  }
  double worst_net = -INFINITY, worst_tri = -INFINITY;
  for (int trial = 0; trial < 1000; ++trial) {
    const Setting& s = settings[trial % settings.size()];
    const int d = s.body->dimension();
    const auto [lo, hi] = s.body->BoundingBox();
    Vec x(d);
    do {
      for (int i = 0; i < d; ++i) x[i] = lo[i] + (hi[i] - lo[i]) * unit(rng);
    } while (!s.body->Contains(x));
    Mat a(d, d);
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) a(i, j) = 2.0 * unit(rng) - 1.0;
    }
    a = a * a.transpose() + 0.1 * Mat::Identity(d, d);
    Vec b(d);
    for (int i = 0; i < d; ++i) b[i] = 4.0 * unit(rng) - 2.0;
    const LossSpec loss = MakeGeneralQuadraticLoss(a, b, 0.0, *s.body);
    const double L = loss.lipschitz();
    const double beta = loss.beta();
    const double eps = s.disc.epsilon();
    const MixedAction h = s.barycentric ? RoundBarycentric(x, s.disc) : RoundProjection(x, s.disc);
    double rounded = 0.0;
    for (size_t i = 0; i < h.support.size(); ++i) {
      rounded += h.probs[i] * loss.Value(s.disc.point(h.support[i]));
    }
    const double err = rounded - loss.Value(x);
    if (s.barycentric) {
      worst_tri = std::max(worst_tri, err - (L + beta / 8.0) * eps * eps);
    } else {
      worst_net = std::max(worst_net, err - L * eps);
    }
  }
  return {worst_net <= 1e-12 && worst_tri <= 1e-12,
          Fmt("worst error - bound: net %.3g, triangulation %.3g", worst_net, worst_tri)};
}

// Criterion 5: measured full swap regret against rounding plus per-point
// regrets, all recomputed from the engine's round record.
Outcome Decomposition() {
  struct Setup {
    LossClass cls;
    int d;
  };
  const std::vector<Setup> setups = {{LossClass::kScSmooth, 1},
                                     {LossClass::kScSmooth, 2},
                                     {LossClass::kStronglyConvex, 1},
                                     {LossClass::kStronglyConvex, 2},
                                     {LossClass::kGeneral, 1}};
  double worst = -INFINITY;
  int largest = 0;
  int shortest = 1 << 30;
  for (int sim = 0; sim < 20; ++sim) {
    const Setup& setup = setups[sim % setups.size()];
    const int d = setup.d;
    auto body = MakeUnitCube(d);
    const double curvature = 1.0;
    const double lipschitz = curvature * std::sqrt(double(d));
    std::int64_t T = 500;
    TableConfiguration table;
    std::shared_ptr<const Discretization> disc;
    while (true) {
      table = ConfigureFromTable(setup.cls, d, T, lipschitz, curvature);
      disc = std::make_shared<const Discretization>(BuildDiscretization(*body, table));
      if (disc->size() <= 50 || T <= 10) break;
      T -= 50;
    }
    if (disc->size() > 50) return {false, "could not keep the point set at 50 or fewer"};
    largest = std::max(largest, disc->size());
    shortest = std::min<int>(shortest, T);
    EngineConfig config = MakeEngineConfig(table, lipschitz, curvature, curvature, 0.5 * d);
    config.record_trace = true;
    SwapEngine engine(body, disc, config);
    std::mt19937_64 rng = MakeRng(500 + sim, 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<MixedAction> plays;
    std::vector<LossSpec> losses;
    for (std::int64_t t = 0; t < T; ++t) {
      const MixedAction play = engine.Play();
      Vec center(d);
      if (sim % 2) {
        center = body->Project(Vec::Constant(d, 1.0) - play.Mean(*disc));
      } else {
        for (int i = 0; i < d; ++i) center[i] = unit(rng);
      }
      LossSpec loss = MakeQuadraticLoss(center, curvature * (1.0 + unit(rng)) / 2.0 + 0.5, *body);
      engine.Observe(loss);
      plays.push_back(play);
      losses.push_back(std::move(loss));
    }
    const double fsr = FullSwapRegret(plays, losses, disc->points(), *body);
    // Per-point regret: weighted loss of what learner s did against its best
    // response (over K for continuous learners, over the point set for
    // experts).
    const bool continuous = engine.config().variant == EngineVariant::kBmcs;
    const int k = disc->size();
    std::vector<std::vector<const LossSpec*>> seen(k);
    std::vector<std::vector<double>> weight(k);
    std::vector<double> incurred(k, 0.0);
    for (std::int64_t t = 0; t < T; ++t) {
      const RoundTrace& tr = engine.trace()[t];
      for (size_t i = 0; i < tr.play.support.size(); ++i) {
        const int s = tr.play.support[i];
        const double x = tr.play.probs[i];
        if (x <= 0.0) continue;
        seen[s].push_back(&losses[t]);
        weight[s].push_back(x);
        if (continuous) {
          incurred[s] += x * losses[t].Value(tr.recommendations[s]);
        } else {
          const MixedAction& row = tr.rows[s];
          for (size_t j = 0; j < row.support.size(); ++j) {
            incurred[s] += x * row.probs[j] * losses[t].Value(disc->point(row.support[j]));
          }
        }
      }
    }
    double sum_reg = 0.0;
    for (int s = 0; s < k; ++s) {
      if (seen[s].empty()) continue;
      double best;
      if (continuous) {
        best = MinimizeWeightedSum(seen[s], weight[s], *body, {});
      } else {
        best = INFINITY;
        for (int j = 0; j < k; ++j) {
          double v = 0.0;
          for (size_t i = 0; i < seen[s].size(); ++i) v += weight[s][i] * seen[s][i]->Value(disc->point(j));
          best = std::min(best, v);
        }
      }
      sum_reg += incurred[s] - best;
    }
    const double delta_t = engine.RoundingBound() * static_cast<double>(T);
    worst = std::max(worst, fsr - (delta_t + sum_reg));
  }
  return {worst <= 1e-6, Fmt("worst FSR - (delta T + sum Reg_s) %.3g; largest point set %.0f; "
                             "horizons down to %.0f",
                             worst, largest, shortest)};
}

// Criterion 6: swap regret against enumeration of every swap function.
Outcome BruteForceSwap() {
  std::mt19937_64 rng(606);
  double worst = 0.0;
  for (int game = 0; game < 50; ++game) {
    const int n = 1 + game % 5;
    const StructuredGame g = RandomStructuredGame(n, 1 + game % 3, 6000 + game);
    const int T = 1 + game % 10;
    GameTranscript tr;
    for (int t = 0; t < T; ++t) {
      tr.p.push_back(RandomSimplex(n, rng));
      tr.q.push_back(RandomSimplex(n, rng));
    }
    for (int side = 0; side < 2; ++side) {
      std::vector<int> phi(n, 0);
      double best = -INFINITY;
      while (true) {
        double gain = 0.0;
        for (int t = 0; t < T; ++t) {
          const Vec& own = side == 0 ? tr.p[t] : tr.q[t];
          const Vec& other = side == 0 ? tr.q[t] : tr.p[t];
          for (int i = 0; i < n; ++i) {
            double u_dev = 0.0, u_here = 0.0;
            for (int j = 0; j < n; ++j) {
              u_dev += other[j] * (side == 0 ? g.LearnerUtility(phi[i], j)
                                             : g.AdversaryUtility(j, phi[i]));
              u_here += other[j] * (side == 0 ? g.LearnerUtility(i, j)
                                              : g.AdversaryUtility(j, i));
            }
            gain += own[i] * (u_dev - u_here);
          }
        }
        best = std::max(best, gain);
        int pos = 0;
        while (pos < n && ++phi[pos] == n) phi[pos++] = 0;
        if (pos == n) break;
      }
      const double got = side == 0 ? SwapRegret(tr, g) : AdversarySwapRegret(tr, g);
      worst = std::max(worst, std::abs(got - best));
    }
  }
  return {worst <= 1e-12, Fmt("max |closed form - enumeration| %.2e", worst)};
}

const std::vector<std::string> kCalibrationAdversaries = {"bernoulli(0.5)", "bernoulli(0.9)",
                                                          "periodic(01)", "adaptive-opposite"};

// Criterion 7: l2 calibration rate.
Outcome CalibrationRate() {
  bool pass = true;
  std::string detail;
  for (const std::string& spec : kCalibrationAdversaries) {
    std::vector<std::pair<double, double>> series;
    for (std::int64_t T : {1000, 10000, 100000}) {
      auto forecaster = MakeL2Forecaster(T);
      auto adversary = MakeBitAdversary(spec, 1);
      const CalibrationTranscript tr = PlayCalibration(*forecaster, *adversary, T);
      series.push_back({double(T), L2CalibrationError(tr)});
    }
    const RateFit fit = FitRate(series);
    auto envelope = [](double T) { return std::cbrt(T) * std::log(T); };
    const double c = series[0].second / envelope(series[0].first);
    bool within = true;
    for (const auto& [T, cal] : series) within = within && cal <= c * envelope(T) + 1e-12;
    pass = pass && fit.slope <= 0.40 && within;
    detail += spec + Fmt(" slope %.3f Cal(1e5) %.2f envelope %.2f; ", fit.slope,
                         series.back().second, c * envelope(series.back().first));
  }
  return {pass, detail};
}

// Criterion 8: discretized calibration envelope and the ordering against the
// two baselines at the coarsest lattice.
Outcome DiscretizedCalibration() {
  const std::int64_t T = 10000;
  std::map<std::string, std::map<double, double>> total;  // algorithm -> eps -> error
  std::map<double, double> per_eps_max;
  std::vector<std::tuple<std::string, double, double>> discretized;  // adversary, eps, error
  for (const std::string& spec : kCalibrationAdversaries) {
    for (const SweepRow& row : RunDiscretizedSweep({T}, {3.0, 4.0, 5.0}, spec, 1)) {
      total[row.algorithm][row.epsilon] += row.discretized_calibration;
      if (row.algorithm == "discretized") {
        discretized.emplace_back(spec, row.epsilon, row.discretized_calibration);
      }
    }
  }
  auto envelope = [&](double eps) {
    return std::sqrt(eps * double(T)) + std::log(double(T)) / eps;
  };
  double smallest = INFINITY, largest = 0.0;
  for (const auto& [spec, eps, err] : discretized) {
    smallest = std::min(smallest, eps);
    largest = std::max(largest, eps);
  }
  double c = 0.0;
  for (const auto& [spec, eps, err] : discretized) {
    if (eps == smallest) c = std::max(c, err / envelope(eps));
  }
  double worst_ratio = 0.0;
  std::string worst_case;
  for (const auto& [spec, eps, err] : discretized) {
    const double ratio = err / (c * envelope(eps));
    if (ratio > worst_ratio) {
      worst_ratio = ratio;
      worst_case = spec + Fmt(" at eps=1/%.0f", std::round(1.0 / eps));
    }
  }
  const double mine = total["discretized"][largest];
  const double rounded = total["rounded"][largest];
  const double mwu = total["lattice-mwu"][largest];
  const bool envelope_ok = worst_ratio <= 1.0 + 1e-12;
  const bool order_ok = mine < rounded && mine < mwu;
  return {envelope_ok && order_ok,
          Fmt("C %.4f; worst error / (C envelope) %.3f (", c, worst_ratio) + worst_case +
              Fmt("); at eps=1/%.0f summed error: new %.2f, ", std::round(1.0 / largest), mine) +
              Fmt("rounded %.2f, lattice MWU %.2f", rounded, mwu)};
}

// Criterion 9: self-play on random structured games.
Outcome SelfPlay() {
  const std::int64_t T = 2000;
  double worst_swap = -INFINITY, worst_gap = -INFINITY;
  for (int game = 0; game < 10; ++game) {
    const StructuredGame g = RandomStructuredGame(20, 2, 900 + game);
    const SelfPlayResult r = RunSelfPlay(g, T);
    const double learner = r.learner_full_swap_regret / T;
    const double adversary = r.adversary_full_swap_regret / T;
    worst_swap = std::max({worst_swap, r.learner_swap_regret / T - learner,
                           r.adversary_swap_regret / T - adversary});
    worst_gap = std::max({worst_gap, r.learner_gap - learner, r.adversary_gap - adversary});
  }
  // For linear losses the two sides of the first inequality agree exactly,
  // so it gets the same 1e-6 allowance as the gap.
  return {worst_swap <= 1e-6 && worst_gap <= 1e-6,
          Fmt("worst average swap regret - FSR/T %.3g; worst equilibrium gap - FSR/T %.3g",
              worst_swap, worst_gap)};
}

// Criterion 10: covering, reconstruction and stationary fixed points.
Outcome GeometryInvariants() {
  std::mt19937_64 rng(1010);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto random_in = [&](const ConvexBody& body) {
    const auto [lo, hi] = body.BoundingBox();
    Vec x(body.dimension());
    do {
      for (int i = 0; i < x.size(); ++i) x[i] = lo[i] + (hi[i] - lo[i]) * unit(rng);
    } while (!body.Contains(x));
    return x;
  };
  double cover_excess = -INFINITY;
  for (const auto& body :
       {MakeInterval(-1.0, 2.0), MakeUnitCube(2), MakeUnitBall(2), MakeUnitBall(3),
        MakePolytope({Vec{{0.0, 0.0}}, Vec{{1.0, 0.2}}, Vec{{0.3, 1.0}}})}) {
    for (double eps : {0.4, 0.2}) {
      const Discretization net = BuildNet(*body, eps);
      for (const Vec& p : net.points()) {
        if (!body->Contains(p, 1e-9)) cover_excess = INFINITY;
      }
      for (int i = 0; i < 200; ++i) {
        const Vec x = random_in(*body);
        double nearest = INFINITY;
        for (const Vec& p : net.points()) nearest = std::min(nearest, (p - x).norm());
        cover_excess = std::max(cover_excess, nearest - eps);
      }
    }
  }
  double rebuild = 0.0;
  double hull_excess = -INFINITY;
  for (const auto& body : {MakeInterval(0.0, 1.0), MakeUnitCube(2), MakeUnitCube(3),
                           MakeUnitBall(2), MakeUnitBall(3)}) {
    const double eps = 0.3;
    const Discretization tri = BuildTriangulation(*body, eps);
    for (const auto& s : tri.simplices()) {
      for (int a : s) {
        for (int b : s) hull_excess = std::max(hull_excess, (tri.point(a) - tri.point(b)).norm() - 2 * eps);
      }
    }
    for (int i = 0; i < 200; ++i) {
      const Vec x = random_in(*body);
      const SimplexHit hit = tri.LocateSimplex(x);
      Vec rebuilt = Vec::Zero(x.size());
      double mass = 0.0;
      for (size_t j = 0; j < hit.vertices.size(); ++j) {
        rebuilt += hit.weights[j] * tri.point(hit.vertices[j]);
        mass += hit.weights[j];
      }
      rebuild = std::max({rebuild, (rebuilt - hit.nearest).norm(), std::abs(mass - 1.0)});
      hull_excess = std::max(hull_excess, (hit.nearest - x).norm() - eps * eps);
    }
  }
  double residual = 0.0;
  for (int chain = 0; chain < 1000; ++chain) {
    const int n = 1 + static_cast<int>(unit(rng) * 40);
    Mat q = Mat::Zero(n, n);
    switch (chain % 4) {
      case 0:  // dense
        for (int i = 0; i < n; ++i) q.row(i) = RandomSimplex(n, rng).transpose();
        break;
      case 1: {  // periodic: a random cyclic permutation
        std::vector<int> perm(n);
        for (int i = 0; i < n; ++i) perm[i] = i;
        std::shuffle(perm.begin(), perm.end(), rng);
        for (int i = 0; i < n; ++i) q(perm[i], perm[(i + 1) % n]) = 1.0;
        break;
      }
      case 2: {  // reducible: two closed classes and transient states
        const int cut = n / 2;
        for (int i = 0; i < n; ++i) {
          const int lo = i < cut ? 0 : cut;
          const int hi = i < cut ? cut : n;
          if (i % 3 == 2) {
            q.row(i) = RandomSimplex(n, rng).transpose();
          } else if (hi > lo) {
            const Vec w = RandomSimplex(hi - lo, rng);
            q.block(i, lo, 1, hi - lo) = w.transpose();
          } else {
            q(i, i) = 1.0;
          }
        }
        for (int i = 0; i < n; ++i) {
          if (q.row(i).sum() == 0.0) q(i, i) = 1.0;
        }
        break;
      }
      default:  // sparse
        for (int i = 0; i < n; ++i) {
          const int m = 1 + static_cast<int>(unit(rng) * 3);
          const Vec w = RandomSimplex(m, rng);
          for (int j = 0; j < m; ++j) q(i, static_cast<int>(unit(rng) * n)) += w[j];
        }
        break;
    }
    MarkovPolicy policy;
    for (int i = 0; i < n; ++i) policy.rows.push_back(MixedAction::FromDense(q.row(i).transpose()));
    const Vec x = StationaryDistribution(policy).distribution.ToDense(n);
    const Vec moved = (x.transpose() * q).transpose();
    residual = std::max({residual, (moved - x).lpNorm<1>(), std::abs(x.sum() - 1.0),
                         -std::min(0.0, x.minCoeff())});
  }
  return {cover_excess <= 1e-12 && rebuild <= 1e-9 && hull_excess <= 1e-9 && residual <= 1e-9,
          Fmt("covering excess %.3g, reconstruction %.2e, hull excess %.3g, stationary residual %.2e",
              cover_excess, rebuild, hull_excess, residual)};
}

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "calibration error equals full swap regret", 10, CalibrationIdentity},
      {2, "lossless interval rounding", 1, LosslessIntervalRounding},
      {3, "scaled descent regret envelopes", 30, DescentEnvelopes},
      {4, "rounding error envelopes", 5, RoundingEnvelopes},
      {5, "swap regret decomposition", 60, Decomposition},
      {6, "swap regret against brute-force enumeration", 10, BruteForceSwap},
      {7, "l2 calibration rate", 15 * 60, CalibrationRate},
      {8, "discretized calibration envelope and ordering", 20 * 60, DiscretizedCalibration},
      {9, "structured game self-play", 5 * 60, SelfPlay},
      {10, "geometry and stationary invariants", 10, GeometryInvariants},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = seconds <= c.budget_seconds;
    const bool pass = o.pass && in_time;
    failures += !pass;
    std::printf("%s criterion %d: %s | %s | %.2f s of %.0f s%s\n", pass ? "PASS" : "FAIL", c.id,
                c.name, o.detail.c_str(), seconds, c.budget_seconds,
                in_time ? "" : " (over budget)");
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
