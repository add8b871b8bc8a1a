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

#ifndef FULLSWAP_HARNESS_H_
#define FULLSWAP_HARNESS_H_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fullswap/calibration.h"
#include "fullswap/common.h"
#include "fullswap/games.h"
#include "fullswap/geometry.h"
#include "fullswap/losses.h"
#include "fullswap/oco.h"
#include "fullswap/swap_engine.h"
#include "json.hpp"

namespace fullswap {

// ---------------------------------------------------------------------------
// Evaluators. These recompute regret from plays and losses only; they never
// read an engine's internal state.

enum class InnerMinMethod { kAuto, kClosedForm, kGridSearch, kProjectedGradient };

struct EvaluatorOptions {
  InnerMinMethod method = InnerMinMethod::kAuto;
  int grid_points = 10000;
  double golden_width = 1e-10;
  int starts = 16;
  int gradient_iterations = 4000;
  std::uint64_t seed = 0;
};

// min over y in the body of sum_t weights[t] * losses[t](y).
double MinimizeWeightedSum(const std::vector<const LossSpec*>& losses,
                           const std::vector<double>& weights,
                           const ConvexBody& body, const EvaluatorOptions& options,
                           Vec* argmin = nullptr);

// sum over support points s of
//   sum_t x_t[s] l_t(s) - min_{y in K} sum_t x_t[s] l_t(y).
double FullSwapRegret(const std::vector<MixedAction>& plays,
                      const std::vector<LossSpec>& losses,
                      const std::vector<Vec>& points, const ConvexBody& body,
                      const EvaluatorOptions& options = {});

// The same quantity for a calibration transcript under squared-error losses.
double CalibrationFullSwapRegret(const CalibrationTranscript& tr,
                                 const EvaluatorOptions& options = {});

// Incremental full swap regret for losses from the isotropic quadratic
// family (this covers calibration and linear game losses). Closed-form
// comparator per point.
class QuadraticRegretTracker {
 public:
  QuadraticRegretTracker(std::vector<Vec> points, std::shared_ptr<const ConvexBody> body);

  // Charges weight * loss to point s; loss must carry a quadratic form.
  void Add(int s, double weight, const LossSpec& loss);
  // Charges weight * loss evaluated at `where` instead of at point s, with
  // the same comparator. Tracks subroutine regret for recommendations.
  void AddAt(int s, double weight, const LossSpec& loss, const Vec& where);
  // Charges weight * value, an already evaluated (possibly expected) loss.
  void AddValue(int s, double weight, const LossSpec& loss, double value);
  double Comparator(int s) const;
  // Best fixed candidate instead of the best point of the body.
  double ComparatorOver(int s, const std::vector<Vec>& candidates) const;
  double Incurred(int s) const { return incurred_[s]; }
  double Mass(int s) const { return mass_[s]; }
  double Total() const;
  int size() const { return static_cast<int>(points_.size()); }

 private:
  void Accumulate(int s, double weight, const LossSpec& loss);

  std::vector<Vec> points_;
  std::shared_ptr<const ConvexBody> body_;
  std::vector<double> mass_;
  std::vector<double> curvature_;
  std::vector<Vec> linear_;
  std::vector<double> constant_;
  std::vector<double> incurred_;
};

// ---------------------------------------------------------------------------
// Adversaries.

class BitAdversary {
 public:
  virtual ~BitAdversary() = default;
  // Outcome for this round given the forecast already announced.
  virtual int Next(const Forecast& forecast) = 0;
};

class GameAdversary {
 public:
  virtual ~GameAdversary() = default;
  virtual Vec Next(const Vec& learner_strategy, const StructuredGame& game) = 0;
};

// Specs: bernoulli(p), periodic(bits), adaptive-opposite,
// adaptive-mean-revert, linear-random(seed), zero-sum-best-response.
std::unique_ptr<BitAdversary> MakeBitAdversary(const std::string& spec,
                                               std::uint64_t seed);
// Specs: linear-random(seed), zero-sum-best-response.
std::unique_ptr<GameAdversary> MakeGameAdversary(const std::string& spec,
                                                 std::uint64_t seed);

// ---------------------------------------------------------------------------
// Rate fitting.

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  bool floored = false;  // some value was raised to 1e-9 before the log
};

// Least squares of log(value) on log(T). Needs three distinct horizons
// spanning at least a factor of ten.
RateFit FitRate(const std::vector<std::pair<double, double>>& series);

// ---------------------------------------------------------------------------
// Online convex optimization envelope runs.

struct OcoCase {
  StepSchedule schedule = StepSchedule::kGds;
  int dimension = 1;
  int pattern = 0;
  std::uint64_t seed = 0;
  std::int64_t horizon = 10000;
};

inline constexpr int kOcoPatterns = 8;

struct OcoRun {
  ScheduleParams params;
  std::vector<double> prefix_regret;
  std::vector<double> prefix_bound;
  double worst_excess = 0.0;  // max over prefixes of regret - bound
};

// Runs one learner against a generated (possibly adaptive) sequence of
// losses and scales and measures exact prefix regret.
OcoRun RunOcoCase(const OcoCase& c);

// ---------------------------------------------------------------------------
// Self-play in structured games.

struct SelfPlayResult {
  GameTranscript transcript;
  double learner_swap_regret = 0.0;
  double adversary_swap_regret = 0.0;
  double learner_full_swap_regret = 0.0;
  double adversary_full_swap_regret = 0.0;
  double learner_gap = 0.0;
  double adversary_gap = 0.0;
};

// Random game with n actions per side and embeddings drawn uniformly from
// the unit ball of R^d.
StructuredGame RandomStructuredGame(int n, int d, std::uint64_t seed);
SelfPlayResult RunSelfPlay(const StructuredGame& game, std::int64_t horizon,
                           LossClass row = LossClass::kLinear);

// ---------------------------------------------------------------------------
// Experiments.

struct ExperimentConfig {
  std::string scenario = "calibration";
  std::int64_t horizon = 1000;
  int dimension = 1;
  std::string loss_class;  // empty: the scenario's default
  std::optional<double> epsilon;
  std::string adversary = "bernoulli(0.5)";
  std::uint64_t seed = 0;
  // discretized-calibration: discretized | rounded | lattice-mwu
  std::string algorithm = "discretized";
  int actions = 20;
  std::string game_file;
  int checkpoints = 40;
  std::string out;  // prefix; writes <out>.csv and <out>.json when set

  static ExperimentConfig FromJson(const nlohmann::json& j);
  nlohmann::json ToJson() const;
  void Validate() const;
};

struct SeriesPoint {
  std::int64_t t = 0;
  double cum_regret = 0.0;
  double bound_envelope = 0.0;  // NaN where no analytic bound applies
  double delta_t = 0.0;
  double sum_reg_s = 0.0;
};

struct RegretReport {
  ExperimentConfig config;
  std::vector<SeriesPoint> series;
  std::map<std::string, double> metrics;
  std::map<std::string, bool> flags;
  double wall_clock_seconds = 0.0;
  std::string input_hash;

  nlohmann::json ToJson(bool include_wall_clock = true) const;
};

RegretReport RunExperiment(const ExperimentConfig& config);
void WriteSeriesCsv(const RegretReport& report, const std::string& path);
void WriteReportJson(const RegretReport& report, const std::string& path);

// One row per (algorithm, T, eps) of the discretized calibration comparison.
struct SweepRow {
  std::string algorithm;
  std::int64_t horizon = 0;
  double epsilon = 0.0;
  double discretized_calibration = 0.0;
  double discretized_swap_regret = 0.0;
  double calibration = 0.0;
};

// eps = T^(-1/a) for each a in `inverse_exponents`, snapped to 1/round(1/eps).
std::vector<SweepRow> RunDiscretizedSweep(const std::vector<std::int64_t>& horizons,
                                          const std::vector<double>& inverse_exponents,
                                          const std::string& adversary,
                                          std::uint64_t seed);
void WriteSweepCsv(const std::vector<SweepRow>& rows, const std::string& path);

// Plays a forecaster against an adversary for T rounds.
CalibrationTranscript PlayCalibration(Forecaster& forecaster, BitAdversary& adversary,
                                      std::int64_t horizon);

// Git blob hash: SHA-1 of "blob <size>\0" followed by the bytes.
std::string ContentHash(const std::string& bytes);

// Checkpoints 1 .. T, roughly log-spaced, always including T.
std::vector<std::int64_t> Checkpoints(std::int64_t horizon, int count);

}  // namespace fullswap

#endif  // FULLSWAP_HARNESS_H_
