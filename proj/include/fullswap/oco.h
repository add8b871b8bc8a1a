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

#ifndef FULLSWAP_OCO_H_
#define FULLSWAP_OCO_H_

#include <memory>
#include <vector>

#include "fullswap/common.h"
#include "fullswap/geometry.h"
#include "fullswap/losses.h"

namespace fullswap {

// Step-size schedules for projected gradient descent on scaled losses
// g_t * l_t, all driven by the cumulative scale G_t = sum of g_s.
//   kConvex: D / (L sqrt(2 G))
//   kGds:    1/alpha for G <= 1, then 1 / (alpha G)
//   kGdk:    2/alpha on [0, 1], 2 / (alpha G) up to (2 / (alpha c))^2,
//            then c / sqrt(G), with c = sqrt(2) eps / L
enum class StepSchedule { kConvex, kGds, kGdk };

struct ScheduleParams {
  double alpha = 0.0;
  double lipschitz = 1.0;
  double epsilon = 0.0;
  double diameter = 1.0;
};

double GdkConstant(const ScheduleParams& p);
double LearningRate(StepSchedule schedule, const ScheduleParams& p, double g);
// Worst-case scaled external regret after cumulative scale g.
double RegretEnvelope(StepSchedule schedule, const ScheduleParams& p, double g);

// Projected online gradient descent with scale parameters. Step plays the
// current iterate, charges g * l, and moves.
class ScaledOgd {
 public:
  ScaledOgd(std::shared_ptr<const ConvexBody> body, StepSchedule schedule,
            ScheduleParams params, Vec x1);

  const Vec& current() const { return x_; }
  // Returns the iterate that was played this round.
  Vec Step(const LossSpec& loss, double g);
  double cumulative_scale() const { return cumulative_; }
  double last_rate() const { return last_rate_; }
  StepSchedule schedule() const { return schedule_; }
  const ScheduleParams& params() const { return params_; }

 private:
  std::shared_ptr<const ConvexBody> body_;
  StepSchedule schedule_;
  ScheduleParams params_;
  Vec x_;
  double cumulative_ = 0.0;
  double last_rate_ = 0.0;
};

// Gradient descent on the piecewise-linear interpolation of each loss over a
// 1D grid, using the kGdk schedule with eps equal to the largest grid gap.
class LinearizedGdk {
 public:
  LinearizedGdk(std::shared_ptr<const ConvexBody> body,
                std::shared_ptr<const Discretization> grid, double alpha,
                double lipschitz, Vec x1);

  const Vec& current() const { return ogd_.current(); }
  Vec Step(const LossSpec& loss, double g);
  double last_rate() const { return ogd_.last_rate(); }
  const ScaledOgd& ogd() const { return ogd_; }

 private:
  std::shared_ptr<const Discretization> grid_;
  ScaledOgd ogd_;
};

enum class MwuRate { kFixed, kAdaptive };

// Multiplicative weights over k experts. Cumulative scaled losses are kept
// and normalized through a log-sum-exp shift. The adaptive rate is
// sqrt(ln k / max(G, 1)) / range, where range bounds each loss spread.
class Mwu {
 public:
  Mwu(int k, MwuRate rate, double parameter);

  int size() const { return static_cast<int>(cumulative_.size()); }
  double CurrentRate() const;
  Vec Distribution() const;
  void Step(const std::vector<double>& losses, double g);
  const std::vector<double>& cumulative_losses() const { return cumulative_; }
  double cumulative_scale() const { return scale_; }

 private:
  std::vector<double> cumulative_;
  MwuRate rate_;
  double parameter_;
  double scale_ = 0.0;
};

}  // namespace fullswap

#endif  // FULLSWAP_OCO_H_
