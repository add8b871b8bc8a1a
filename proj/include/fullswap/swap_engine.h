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

#ifndef FULLSWAP_SWAP_ENGINE_H_
#define FULLSWAP_SWAP_ENGINE_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "fullswap/common.h"
#include "fullswap/geometry.h"
#include "fullswap/losses.h"
#include "fullswap/oco.h"

namespace fullswap {

// A finitely supported distribution over the points of a discretization.
struct MixedAction {
  std::vector<int> support;
  std::vector<double> probs;

  static MixedAction Point(int i) { return {{i}, {1.0}}; }
  // Keeps entries strictly above `drop`, in index order, renormalized.
  static MixedAction FromDense(const Vec& p, double drop = 0.0);
  Vec ToDense(int n) const;
  double Probability(int i) const;
  Vec Mean(const Discretization& disc) const;
  // Throws InvalidInputError unless indices are distinct and in range,
  // probabilities are nonnegative, and they sum to one within tol.
  void Validate(int n, double tol = 1e-9) const;
};

// Row-stochastic matrix stored as one MixedAction per row.
struct MarkovPolicy {
  std::vector<MixedAction> rows;

  int size() const { return static_cast<int>(rows.size()); }
  Mat ToDense() const;
  void Validate(double tol = 1e-9) const;
};

enum class RoundingRule { kProjection, kBarycentric, kInterval };

std::string ToString(RoundingRule r);

// Point mass on the nearest point of the discretization.
MixedAction RoundProjection(const Vec& q, const Discretization& disc);
// Barycentric weights of the projection of q onto the triangulation. The mean
// equals that projection exactly.
MixedAction RoundBarycentric(const Vec& q, const Discretization& disc);

struct IntervalRoundingResult {
  MixedAction action;
  bool clamped = false;  // q was outside the grid and was moved onto it
};
// Two-point split between the grid neighbours of x with mean exactly x.
IntervalRoundingResult RoundInterval(double x, const Discretization& grid);

MixedAction Round(RoundingRule rule, const Vec& q, const Discretization& disc);

// Worst-case expected loss increase of rounding for an L-Lipschitz,
// beta-smooth loss.
double RoundingBound(RoundingRule rule, DiscretizationKind kind, double lipschitz,
                     double beta, double eps);

struct StationaryOptions {
  // Mixes Q toward uniform by this amount so the chain is irreducible.
  double damping = 1e-12;
  // Chains up to this size use Grassmann-Taksar-Heyman elimination;
  // larger ones use power iteration on the lazy chain.
  int direct_limit = 2000;
  double tolerance = 1e-13;
  int max_iterations = 1'000'000;
};

struct StationaryResult {
  MixedAction distribution;
  double residual = 0.0;  // |x Q - x|_1 for the undamped Q
  bool direct = true;
  int iterations = 0;
};

StationaryResult StationaryDistribution(const MarkovPolicy& q,
                                        const StationaryOptions& options = {});
double StationaryResidual(const MarkovPolicy& q, const Vec& x);

enum class EngineVariant { kBmcs, kBmns };
enum class SubroutineKind { kConvexOgd, kGds, kGdk, kLinearizedGdk, kMwu };

std::string ToString(EngineVariant v);
std::string ToString(SubroutineKind s);

struct EngineConfig {
  EngineVariant variant = EngineVariant::kBmcs;
  SubroutineKind subroutine = SubroutineKind::kGds;
  RoundingRule rounding = RoundingRule::kBarycentric;
  double lipschitz = 1.0;
  double alpha = 0.0;
  double beta = 0.0;
  // Only for kGdk; kLinearizedGdk derives it from the grid.
  double nsc_epsilon = 0.0;
  MwuRate mwu_rate = MwuRate::kAdaptive;
  // Loss spread for the adaptive rate, or the fixed rate itself.
  double mwu_parameter = 1.0;
  bool record_trace = false;
  StationaryOptions stationary;
};

// What happened in one round, for regret decomposition and debugging.
struct RoundTrace {
  MixedAction play;
  std::vector<Vec> recommendations;  // q_{s,t}, continuous variant only
  std::vector<MixedAction> rows;     // row s of Q_t
  std::vector<double> rates;         // step size used by subroutine s
  double stationary_residual = 0.0;
};

// The swap-regret reduction: one external-regret learner per point of the
// discretization, combined through the stationary distribution of the
// policy they recommend. Learners are created on first positive weight;
// until then each recommends the center of mass of the point set.
class SwapEngine {
 public:
  SwapEngine(std::shared_ptr<const ConvexBody> body,
             std::shared_ptr<const Discretization> disc, EngineConfig config);
  ~SwapEngine();
  SwapEngine(SwapEngine&&) noexcept;

  // Mixed action for the current round. Repeated calls return the same value.
  const MixedAction& Play();
  // Charges the loss to every learner with positive weight and advances.
  void Observe(const LossSpec& loss);
  // Play, ask the adversary for a loss, Observe.
  MixedAction BmRound(const std::function<LossSpec(const MixedAction&)>& adversary);

  int rounds() const { return rounds_; }
  const ConvexBody& body() const { return *body_; }
  const Discretization& discretization() const { return *disc_; }
  std::shared_ptr<const Discretization> discretization_ptr() const { return disc_; }
  const EngineConfig& config() const { return config_; }
  double RoundingBound() const;
  int instantiated() const;
  const std::vector<RoundTrace>& trace() const { return trace_; }
  void WriteTraceCsv(const std::string& path) const;

  // Called at the end of every Observe with that round's trace, without
  // retaining it. Used to stream per-point bookkeeping over long runs.
  using RoundObserver = std::function<void(const RoundTrace&, const LossSpec&)>;
  void SetObserver(RoundObserver observer) { observer_ = std::move(observer); }

 private:
  class PointLearner;
  PointLearner& LearnerAt(int s);
  MixedAction RowFor(int s);

  std::shared_ptr<const ConvexBody> body_;
  std::shared_ptr<const Discretization> disc_;
  EngineConfig config_;
  Vec start_;
  std::vector<std::unique_ptr<PointLearner>> learners_;
  std::vector<std::unique_ptr<Mwu>> experts_;
  MixedAction default_row_;
  bool has_play_ = false;
  MixedAction play_;
  MarkovPolicy policy_;
  std::vector<Vec> recommendations_;
  int rounds_ = 0;
  std::vector<RoundTrace> trace_;
  RoundTrace pending_;
  RoundObserver observer_;
};

// One row of the rate table: how to discretize and which reduction to run
// for a loss class, dimension, and horizon.
struct TableConfiguration {
  std::string row;
  DiscretizationKind discretization = DiscretizationKind::kNet;
  double epsilon = 0.0;
  double exponent = 0.0;  // predicted regret exponent of T
  EngineVariant variant = EngineVariant::kBmns;
  SubroutineKind subroutine = SubroutineKind::kMwu;
  RoundingRule rounding = RoundingRule::kProjection;
};

TableConfiguration ConfigureFromTable(LossClass cls, int d, std::int64_t horizon,
                                      double lipschitz = 1.0, double alpha = 1.0);
Discretization BuildDiscretization(const ConvexBody& body,
                                   const TableConfiguration& table);
EngineConfig MakeEngineConfig(const TableConfiguration& table, double lipschitz,
                              double alpha, double beta, double loss_range);

}  // namespace fullswap

#endif  // FULLSWAP_SWAP_ENGINE_H_
