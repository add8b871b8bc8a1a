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
#include <limits>

#include "fullswap/oco.h"

namespace fullswap {
namespace {

void CheckCompatible(StepSchedule schedule, LossClass cls) {
  bool ok = false;
  switch (schedule) {
    case StepSchedule::kConvex:
      ok = cls == LossClass::kConvex || cls == LossClass::kLinear ||
           cls == LossClass::kStronglyConvex || cls == LossClass::kScSmooth ||
           cls == LossClass::kNsc;
      break;
    case StepSchedule::kGds:
      ok = cls == LossClass::kStronglyConvex || cls == LossClass::kScSmooth;
      break;
    case StepSchedule::kGdk:
      ok = cls == LossClass::kNsc || cls == LossClass::kStronglyConvex ||
           cls == LossClass::kScSmooth;
      break;
  }
  if (!ok) {
    throw ConfigurationError("loss class " + ToString(cls) +
                             " is not compatible with the step schedule");
  }
}

}  // namespace

double GdkConstant(const ScheduleParams& p) {
  return std::sqrt(2.0) * p.epsilon / p.lipschitz;
}

double LearningRate(StepSchedule schedule, const ScheduleParams& p, double g) {
  if (!(g >= 0)) throw InvalidInputError("LearningRate: negative scale");
  switch (schedule) {
    case StepSchedule::kConvex:
      if (g == 0) return std::numeric_limits<double>::infinity();
      return p.diameter / (p.lipschitz * std::sqrt(2.0 * g));
    case StepSchedule::kGds:
      return g <= 1.0 ? 1.0 / p.alpha : 1.0 / (p.alpha * g);
    case StepSchedule::kGdk: {
      if (g <= 1.0) return 2.0 / p.alpha;
      const double c = GdkConstant(p);
      const double knee = std::pow(2.0 / (p.alpha * c), 2);
      if (g <= knee) return 2.0 / (p.alpha * g);
      return c / std::sqrt(g);
    }
  }
  return 0.0;
}

double RegretEnvelope(StepSchedule schedule, const ScheduleParams& p, double g) {
  const double l = p.lipschitz;
  switch (schedule) {
    case StepSchedule::kConvex:
      return p.diameter * l * std::sqrt(2.0 * g);
    case StepSchedule::kGds:
      return l * l / (2.0 * p.alpha) * (std::log(g + 1.0) + 1.0);
    case StepSchedule::kGdk:
      return 2.0 * std::sqrt(2.0) * p.epsilon * l * std::sqrt(g) +
             l * l / p.alpha * (std::log(g + 1.0) + 1.0);
  }
  return 0.0;
}

ScaledOgd::ScaledOgd(std::shared_ptr<const ConvexBody> body,
                     StepSchedule schedule, ScheduleParams params, Vec x1)
    : body_(std::move(body)), schedule_(schedule), params_(params), x_(std::move(x1)) {
  if (!body_) throw InvalidInputError("ScaledOgd: null body");
  if (x_.size() != body_->dimension()) {
    throw InvalidInputError("ScaledOgd: start point dimension");
  }
  if (!body_->Contains(x_, 1e-9)) {
    throw InvalidInputError("ScaledOgd: start point outside the body");
  }
  if (!(params_.lipschitz > 0)) {
    throw ConfigurationError("ScaledOgd: Lipschitz constant must be positive");
  }
  if (schedule_ != StepSchedule::kConvex && !(params_.alpha > 0)) {
    throw ConfigurationError("ScaledOgd: schedule needs alpha > 0");
  }
  if (schedule_ == StepSchedule::kGdk && !(params_.epsilon > 0)) {
    throw ConfigurationError("ScaledOgd: schedule needs eps > 0");
  }
  if (schedule_ == StepSchedule::kConvex && !(params_.diameter > 0)) {
    throw ConfigurationError("ScaledOgd: schedule needs a positive diameter");
  }
}

Vec ScaledOgd::Step(const LossSpec& loss, double g) {
  if (!(g >= 0.0 && g <= 1.0)) {
    throw InvalidInputError("scale parameter must lie in [0, 1]");
  }
  CheckCompatible(schedule_, loss.loss_class());
  Vec played = x_;
  if (g == 0.0) return played;
  cumulative_ += g;
  last_rate_ = LearningRate(schedule_, params_, cumulative_);
  const Vec grad = loss.Subgradient(x_);
  if (!grad.allFinite()) throw NumericalError("non-finite subgradient");
  x_ = body_->Project(x_ - (last_rate_ * g) * grad);
  if (!x_.allFinite()) throw NumericalError("non-finite iterate");
  return played;
}

LinearizedGdk::LinearizedGdk(std::shared_ptr<const ConvexBody> body,
                             std::shared_ptr<const Discretization> grid,
                             double alpha, double lipschitz, Vec x1)
    : grid_(std::move(grid)),
      ogd_(std::move(body), StepSchedule::kGdk,
           [&] {
             if (!grid_ || grid_->dimension() != 1) {
               throw UnsupportedError("linearized descent needs a 1D grid");
             }
             std::vector<double> v;
             for (const Vec& p : grid_->points()) v.push_back(p[0]);
             std::sort(v.begin(), v.end());
             double gap = 0.0;
             for (size_t i = 1; i < v.size(); ++i) gap = std::max(gap, v[i] - v[i - 1]);
             ScheduleParams p;
             p.alpha = alpha;
             p.lipschitz = lipschitz;
             p.epsilon = gap;
             return p;
           }(),
           std::move(x1)) {}

Vec LinearizedGdk::Step(const LossSpec& loss, double g) {
  if (g == 0.0) return ogd_.current();
  return ogd_.Step(PiecewiseLinearize(loss, *grid_), g);
}

Mwu::Mwu(int k, MwuRate rate, double parameter)
    : cumulative_(k, 0.0), rate_(rate), parameter_(parameter) {
  if (k <= 0) throw InvalidInputError("Mwu: need at least one expert");
  if (!(parameter_ > 0) || !std::isfinite(parameter_)) {
    throw ConfigurationError("Mwu: rate parameter must be positive");
  }
}

double Mwu::CurrentRate() const {
  if (rate_ == MwuRate::kFixed) return parameter_;
  const double k = static_cast<double>(cumulative_.size());
  return std::sqrt(std::log(std::max(k, 2.0)) / std::max(scale_, 1.0)) / parameter_;
}

Vec Mwu::Distribution() const {
  const double eta = CurrentRate();
  const double lo = *std::min_element(cumulative_.begin(), cumulative_.end());
  Vec w(size());
  for (int i = 0; i < size(); ++i) w[i] = std::exp(-eta * (cumulative_[i] - lo));
  return w / w.sum();
}

void Mwu::Step(const std::vector<double>& losses, double g) {
  if (static_cast<int>(losses.size()) != size()) {
    throw InvalidInputError("Mwu: loss vector size");
  }
  if (!(g >= 0.0 && g <= 1.0)) {
    throw InvalidInputError("scale parameter must lie in [0, 1]");
  }
  for (int i = 0; i < size(); ++i) {
    if (!std::isfinite(losses[i])) throw NumericalError("Mwu: non-finite loss");
    cumulative_[i] += g * losses[i];
  }
  scale_ += g;
}

}  // namespace fullswap
