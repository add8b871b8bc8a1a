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
#include <fstream>
#include <limits>
#include <sstream>

#include "fullswap/games.h"

namespace fullswap {
namespace {

Vec JsonVec(const nlohmann::json& j) {
  Vec v(j.size());
  for (size_t i = 0; i < j.size(); ++i) v[i] = j[i].get<double>();
  return v;
}

std::vector<Vec> JsonVecs(const nlohmann::json& j) {
  std::vector<Vec> out;
  for (const auto& row : j) out.push_back(JsonVec(row));
  return out;
}

nlohmann::json VecsJson(const std::vector<Vec>& vs) {
  nlohmann::json out = nlohmann::json::array();
  for (const Vec& v : vs) {
    nlohmann::json row = nlohmann::json::array();
    for (int i = 0; i < v.size(); ++i) row.push_back(v[i]);
    out.push_back(row);
  }
  return out;
}

void CheckDistribution(const Vec& p, int n, const char* what) {
  if (p.size() != n) throw InvalidInputError(std::string(what) + ": length mismatch");
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    if (!(p[i] >= -1e-12)) throw InvalidInputError(std::string(what) + ": negative entry");
    total += p[i];
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw InvalidInputError(std::string(what) + ": does not sum to one");
  }
}

// gain(i, j) = sum_t p_t[i] (u_t[j] - u_t[i]) where u_t[k] is the payoff
// of own action k against the opponent's embedded play.
double SwapRegretFromUtilities(const std::vector<Vec>& own,
                               const std::vector<Vec>& utilities) {
  const int n = static_cast<int>(own[0].size());
  Mat gain = Mat::Zero(n, n);
  for (size_t t = 0; t < own.size(); ++t) {
    const Vec& p = own[t];
    const Vec& u = utilities[t];
    for (int i = 0; i < n; ++i) {
      if (p[i] == 0.0) continue;
      for (int j = 0; j < n; ++j) gain(i, j) += p[i] * (u[j] - u[i]);
    }
  }
  double total = 0.0;
  for (int i = 0; i < n; ++i) total += std::max(0.0, gain.row(i).maxCoeff());
  return total;
}

}  // namespace

std::vector<Vec> StructuredGame::AdversaryRowEmbeddings() const {
  if (!v_prime.empty()) return v_prime;
  std::vector<Vec> out;
  for (const Vec& x : v) out.push_back(-x);
  return out;
}

std::vector<Vec> StructuredGame::AdversaryColumnEmbeddings() const {
  return w_prime.empty() ? w : w_prime;
}

double StructuredGame::AdversaryUtility(int i, int j) const {
  if (v_prime.empty()) return -LearnerUtility(i, j);
  return v_prime[i].dot(w_prime[j]);
}

Mat StructuredGame::LearnerPayoff() const {
  Mat u(learner_actions(), adversary_actions());
  for (int i = 0; i < u.rows(); ++i) {
    for (int j = 0; j < u.cols(); ++j) u(i, j) = LearnerUtility(i, j);
  }
  return u;
}

Mat StructuredGame::AdversaryPayoff() const {
  Mat u(learner_actions(), adversary_actions());
  for (int i = 0; i < u.rows(); ++i) {
    for (int j = 0; j < u.cols(); ++j) u(i, j) = AdversaryUtility(i, j);
  }
  return u;
}

void StructuredGame::Validate() const {
  if (v.empty() || w.empty()) throw InvalidInputError("game: empty action set");
  const int d = dimension();
  auto check = [d](const std::vector<Vec>& vs, const char* what) {
    for (const Vec& x : vs) {
      if (x.size() != d) throw InvalidInputError(std::string(what) + ": ragged embedding");
      CheckFinite(x, what);
      if (x.norm() > 1.0 + 1e-12) {
        throw InvalidInputError(std::string(what) + ": embedding norm above 1");
      }
    }
  };
  check(v, "v");
  check(w, "w");
  if (v_prime.empty() != w_prime.empty()) {
    throw InvalidInputError("game: v_prime and w_prime must be given together");
  }
  if (!v_prime.empty()) {
    if (v_prime.size() != v.size() || w_prime.size() != w.size()) {
      throw InvalidInputError("game: adversary embeddings have the wrong count");
    }
    const int dp = static_cast<int>(v_prime[0].size());
    for (const auto* set : {&v_prime, &w_prime}) {
      for (const Vec& x : *set) {
        if (x.size() != dp) throw InvalidInputError("game: ragged adversary embedding");
        if (x.norm() > 1.0 + 1e-12) {
          throw InvalidInputError("game: adversary embedding norm above 1");
        }
      }
    }
  }
}

nlohmann::json StructuredGame::ToJson() const {
  nlohmann::json j = {{"v", VecsJson(v)}, {"w", VecsJson(w)}};
  if (!v_prime.empty()) {
    j["v_prime"] = VecsJson(v_prime);
    j["w_prime"] = VecsJson(w_prime);
  }
  j["learner_scale"] = learner_scale;
  j["adversary_scale"] = adversary_scale;
  return j;
}

StructuredGame StructuredGame::FromJson(const nlohmann::json& j) {
  StructuredGame g;
  try {
    g.v = JsonVecs(j.at("v"));
    g.w = JsonVecs(j.at("w"));
    if (j.contains("v_prime")) g.v_prime = JsonVecs(j.at("v_prime"));
    if (j.contains("w_prime")) g.w_prime = JsonVecs(j.at("w_prime"));
    g.learner_scale = j.value("learner_scale", 1.0);
    g.adversary_scale = j.value("adversary_scale", 1.0);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInputError(std::string("malformed game: ") + e.what());
  }
  g.Validate();
  return g;
}

Vec Embed(const Vec& p, const std::vector<Vec>& embeddings) {
  if (embeddings.empty()) throw InvalidInputError("Embed: no embeddings");
  CheckDistribution(p, static_cast<int>(embeddings.size()), "Embed");
  Vec x = Vec::Zero(embeddings[0].size());
  for (size_t i = 0; i < embeddings.size(); ++i) {
    if (p[i] != 0.0) x += p[i] * embeddings[i];
  }
  return x;
}

Vec CaratheodoryReduce(const Vec& lambda, const std::vector<Vec>& vertices) {
  const int n = static_cast<int>(vertices.size());
  if (lambda.size() != n) throw InvalidInputError("CaratheodoryReduce: length mismatch");
  const int d = static_cast<int>(vertices[0].size());
  Vec out = lambda;
  while (true) {
    std::vector<int> support;
    for (int i = 0; i < n; ++i) {
      if (out[i] > 0.0) support.push_back(i);
    }
    const int m = static_cast<int>(support.size());
    if (m <= d + 1) break;
    Mat a(d + 1, m);
    for (int k = 0; k < m; ++k) {
      a.block(0, k, d, 1) = vertices[support[k]];
      a(d, k) = 1.0;
    }
    Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullV);
    Vec mu = svd.matrixV().col(m - 1);
    if (mu.maxCoeff() <= 0.0) mu = -mu;
    int pivot = -1;
    double theta = std::numeric_limits<double>::infinity();
    for (int k = 0; k < m; ++k) {
      if (mu[k] > 1e-14) {
        const double r = out[support[k]] / mu[k];
        if (r < theta) {
          theta = r;
          pivot = k;
        }
      }
    }
    if (pivot < 0) break;
    for (int k = 0; k < m; ++k) {
      out[support[k]] = std::max(0.0, out[support[k]] - theta * mu[k]);
    }
    out[support[pivot]] = 0.0;
  }
  const double total = out.sum();
  if (!(total > 0.0)) throw NumericalError("CaratheodoryReduce: lost all mass");
  return out / total;
}

Vec ConvexDecompose(const Vec& x, const std::vector<Vec>& vertices, double tol) {
  if (vertices.empty()) throw InvalidInputError("ConvexDecompose: no vertices");
  for (const Vec& v : vertices) {
    if (v.size() != x.size()) throw InvalidInputError("ConvexDecompose: dimension mismatch");
  }
  CheckFinite(x, "ConvexDecompose query");
  const MinNormPointResult r = ProjectOntoHull(x, vertices);
  const Vec gap = r.point - x;
  if (gap.norm() > tol) {
    throw InfeasibleError("ConvexDecompose: point is outside the hull", gap);
  }
  Vec lambda = Vec::Zero(static_cast<int>(vertices.size()));
  for (size_t k = 0; k < r.support.size(); ++k) lambda[r.support[k]] = r.weights[k];
  lambda = CaratheodoryReduce(lambda, vertices);
  return lambda;
}

StructuredGame NfgToStructured(const Mat& learner_payoff, const Mat& adversary_payoff) {
  const int n = static_cast<int>(learner_payoff.rows());
  const int m = static_cast<int>(learner_payoff.cols());
  if (n == 0 || m == 0) throw InvalidInputError("NfgToStructured: empty matrix");
  if (adversary_payoff.rows() != n || adversary_payoff.cols() != m) {
    throw InvalidInputError("NfgToStructured: payoff shapes differ");
  }
  if (!learner_payoff.allFinite() || !adversary_payoff.allFinite()) {
    throw InvalidInputError("NfgToStructured: non-finite payoff");
  }
  auto build = [&](const Mat& u, std::vector<Vec>* rows, std::vector<Vec>* cols,
                   double* scale) {
    rows->clear();
    cols->clear();
    double largest = 0.0;
    if (n <= m) {
      for (int j = 0; j < m; ++j) largest = std::max(largest, u.col(j).norm());
      *scale = largest > 1.0 ? 1.0 / largest : 1.0;
      for (int i = 0; i < n; ++i) rows->push_back(Vec::Unit(n, i));
      for (int j = 0; j < m; ++j) cols->push_back(*scale * u.col(j));
    } else {
      for (int i = 0; i < n; ++i) largest = std::max(largest, u.row(i).norm());
      *scale = largest > 1.0 ? 1.0 / largest : 1.0;
      for (int i = 0; i < n; ++i) rows->push_back(*scale * u.row(i).transpose());
      for (int j = 0; j < m; ++j) cols->push_back(Vec::Unit(m, j));
    }
  };
  StructuredGame g;
  build(learner_payoff, &g.v, &g.w, &g.learner_scale);
  build(adversary_payoff, &g.v_prime, &g.w_prime, &g.adversary_scale);
  return g;
}

Mat ReadCsvMatrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInputError("cannot read " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw InvalidInputError("bad matrix entry in " + path + ": " + cell);
      }
    }
    if (!rows.empty() && row.size() != rows[0].size()) {
      throw InvalidInputError("ragged matrix in " + path);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InvalidInputError("empty matrix in " + path);
  Mat m(rows.size(), rows[0].size());
  for (size_t i = 0; i < rows.size(); ++i) {
    for (size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

void GameTranscript::Validate(const StructuredGame& game) const {
  if (p.size() != q.size()) throw InvalidInputError("transcript: length mismatch");
  if (p.empty()) throw InvalidInputError("transcript: empty");
  for (size_t t = 0; t < p.size(); ++t) {
    CheckDistribution(p[t], game.learner_actions(), "learner strategy");
    CheckDistribution(q[t], game.adversary_actions(), "adversary strategy");
  }
}

double SwapRegret(const GameTranscript& tr, const StructuredGame& game) {
  tr.Validate(game);
  const Mat payoff = game.LearnerPayoff();
  std::vector<Vec> utilities;
  for (const Vec& q : tr.q) utilities.push_back(payoff * q);
  return SwapRegretFromUtilities(tr.p, utilities);
}

double AdversarySwapRegret(const GameTranscript& tr, const StructuredGame& game) {
  tr.Validate(game);
  const Mat payoff = game.AdversaryPayoff();
  std::vector<Vec> utilities;
  for (const Vec& p : tr.p) utilities.push_back(payoff.transpose() * p);
  return SwapRegretFromUtilities(tr.q, utilities);
}

Mat EmpiricalJoint(const GameTranscript& tr) {
  if (tr.p.empty()) throw InvalidInputError("transcript: empty");
  Mat joint = Mat::Zero(tr.p[0].size(), tr.q[0].size());
  for (size_t t = 0; t < tr.p.size(); ++t) joint += tr.p[t] * tr.q[t].transpose();
  return joint / static_cast<double>(tr.p.size());
}

std::pair<double, double> CorrelatedEqGap(const Mat& joint, const StructuredGame& game) {
  const int n = game.learner_actions();
  const int m = game.adversary_actions();
  if (joint.rows() != n || joint.cols() != m) {
    throw InvalidInputError("CorrelatedEqGap: joint distribution shape");
  }
  if (std::abs(joint.sum() - 1.0) > 1e-9 || joint.minCoeff() < -1e-12) {
    throw InvalidInputError("CorrelatedEqGap: not a distribution");
  }
  const Mat ul = game.LearnerPayoff();
  const Mat ua = game.AdversaryPayoff();
  double learner = 0.0;
  for (int i = 0; i < n; ++i) {
    // Conditional on recommendation i, the value of switching to k.
    const Vec value = ul * joint.row(i).transpose();
    learner += std::max(0.0, value.maxCoeff() - value[i]);
  }
  double adversary = 0.0;
  for (int j = 0; j < m; ++j) {
    const Vec value = ua.transpose() * joint.col(j);
    adversary += std::max(0.0, value.maxCoeff() - value[j]);
  }
  return {learner, adversary};
}

StructuredLearner::StructuredLearner(std::vector<Vec> embeddings,
                                     std::shared_ptr<const ConvexBody> body,
                                     SwapEngine engine)
    : embeddings_(std::move(embeddings)),
      body_(std::move(body)),
      engine_(std::move(engine)),
      decompositions_(engine_.discretization().size()),
      decomposed_(engine_.discretization().size(), 0) {}

const Vec& StructuredLearner::Decomposition(int point) {
  if (!decomposed_[point]) {
    decompositions_[point] =
        ConvexDecompose(engine_.discretization().point(point), embeddings_);
    decomposed_[point] = 1;
  }
  return decompositions_[point];
}

Vec StructuredLearner::NextStrategy() {
  const MixedAction play = engine_.Play();
  Vec p = Vec::Zero(static_cast<int>(embeddings_.size()));
  for (size_t k = 0; k < play.support.size(); ++k) {
    p += play.probs[k] * Decomposition(play.support[k]);
  }
  plays_.push_back(play);
  return p / p.sum();
}

void StructuredLearner::Observe(const Vec& opponent_embedding) {
  LossSpec loss = MakeLinearLoss(-opponent_embedding, *body_);
  engine_.Observe(loss);
  losses_.push_back(std::move(loss));
}

StructuredLearner MakeStructuredLearner(const std::vector<Vec>& embeddings,
                                        std::int64_t horizon, LossClass cls) {
  auto body = std::make_shared<const Polytope>(embeddings);
  const TableConfiguration table =
      ConfigureFromTable(cls, body->dimension(), horizon);
  auto disc = std::make_shared<const Discretization>(BuildDiscretization(*body, table));
  // Opponent embeddings have norm at most 1, so |<x, y>| <= 1.
  EngineConfig config = MakeEngineConfig(table, 1.0, 0.0, 0.0, 2.0);
  return StructuredLearner(embeddings, body, SwapEngine(body, disc, config));
}

}  // namespace fullswap
