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

#ifndef FULLSWAP_GAMES_H_
#define FULLSWAP_GAMES_H_

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "fullswap/common.h"
#include "fullswap/swap_engine.h"
#include "json.hpp"

namespace fullswap {

// A game whose learner payoff is <v_i, w_j>. When v_prime / w_prime are
// empty the adversary payoff is the negation (zero-sum).
struct StructuredGame {
  std::vector<Vec> v;
  std::vector<Vec> w;
  std::vector<Vec> v_prime;
  std::vector<Vec> w_prime;
  // Payoff units per unit of the source matrix, for games built from
  // normal form; 1 otherwise.
  double learner_scale = 1.0;
  double adversary_scale = 1.0;

  int dimension() const { return v.empty() ? 0 : static_cast<int>(v[0].size()); }
  int learner_actions() const { return static_cast<int>(v.size()); }
  int adversary_actions() const { return static_cast<int>(w.size()); }
  bool zero_sum() const { return v_prime.empty(); }
  // Embeddings that define the adversary payoff <v'_i, w'_j>.
  std::vector<Vec> AdversaryRowEmbeddings() const;
  std::vector<Vec> AdversaryColumnEmbeddings() const;

  double LearnerUtility(int i, int j) const { return v[i].dot(w[j]); }
  double AdversaryUtility(int i, int j) const;
  Mat LearnerPayoff() const;
  Mat AdversaryPayoff() const;
  // Throws InvalidInputError on empty or ragged embeddings or norms above 1.
  void Validate() const;

  nlohmann::json ToJson() const;
  static StructuredGame FromJson(const nlohmann::json& j);
};

// sum_i p_i e_i for a distribution p.
Vec Embed(const Vec& p, const std::vector<Vec>& embeddings);

// Convex weights lambda with sum lambda_i vertex_i = x and at most d + 1
// nonzero entries. Deterministic for a fixed vertex order. Throws
// InfeasibleError when x is farther than tol from the hull.
Vec ConvexDecompose(const Vec& x, const std::vector<Vec>& vertices,
                    double tol = 1e-9);
// Pivots along null-space directions of [v_i; 1] until the support is
// affinely independent. Keeps sum lambda_i v_i fixed.
Vec CaratheodoryReduce(const Vec& lambda, const std::vector<Vec>& vertices);

// Structured form of a bimatrix game with d = min(n, n'): unit basis
// vectors on the side with fewer actions, payoff rows or columns on the
// other, scaled down when a norm exceeds 1.
StructuredGame NfgToStructured(const Mat& learner_payoff,
                               const Mat& adversary_payoff);
Mat ReadCsvMatrix(const std::string& path);

struct GameTranscript {
  std::vector<Vec> p;  // learner mixed strategies
  std::vector<Vec> q;  // adversary mixed strategies

  int rounds() const { return static_cast<int>(p.size()); }
  void Validate(const StructuredGame& game) const;
};

// sum_i max_j sum_t p_t[i] (u(j, q_t) - u(i, q_t)) for the learner.
double SwapRegret(const GameTranscript& tr, const StructuredGame& game);
// The same from the adversary's side, under its own payoff.
double AdversarySwapRegret(const GameTranscript& tr, const StructuredGame& game);

// (1/T) sum_t p_t q_t^T.
Mat EmpiricalJoint(const GameTranscript& tr);
// Largest total swap-deviation gain for each player under a joint
// distribution over action pairs.
std::pair<double, double> CorrelatedEqGap(const Mat& joint,
                                          const StructuredGame& game);

// Plays a structured game through a full-swap-regret engine over
// conv(embeddings): each point of the engine's mixed action is decomposed
// into a distribution over actions, and the engine sees the linear loss
// x -> -<x, y_t>.
class StructuredLearner {
 public:
  StructuredLearner(std::vector<Vec> embeddings, std::shared_ptr<const ConvexBody> body,
                    SwapEngine engine);

  // Mixed strategy over actions for this round.
  Vec NextStrategy();
  void Observe(const Vec& opponent_embedding);

  const SwapEngine& engine() const { return engine_; }
  SwapEngine& mutable_engine() { return engine_; }
  const ConvexBody& body() const { return *body_; }
  const std::vector<MixedAction>& plays() const { return plays_; }
  const std::vector<LossSpec>& losses() const { return losses_; }

 private:
  const Vec& Decomposition(int point);

  std::vector<Vec> embeddings_;
  std::shared_ptr<const ConvexBody> body_;
  SwapEngine engine_;
  std::vector<Vec> decompositions_;
  std::vector<char> decomposed_;
  std::vector<MixedAction> plays_;
  std::vector<LossSpec> losses_;
};

// Builds a learner over conv(embeddings) with the rate-table row for
// linear losses (or `cls` when given) at horizon T.
StructuredLearner MakeStructuredLearner(const std::vector<Vec>& embeddings,
                                        std::int64_t horizon,
                                        LossClass cls = LossClass::kLinear);

}  // namespace fullswap

#endif  // FULLSWAP_GAMES_H_
