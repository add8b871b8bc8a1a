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
#include <fstream>
#include <sstream>
#include <variant>

#include "fullswap/swap_engine.h"

namespace fullswap {

std::string ToString(EngineVariant v) {
  return v == EngineVariant::kBmcs ? "bmcs" : "bmns";
}

std::string ToString(SubroutineKind s) {
  switch (s) {
    case SubroutineKind::kConvexOgd:
      return "ogd";
    case SubroutineKind::kGds:
      return "gds";
    case SubroutineKind::kGdk:
      return "gdk";
    case SubroutineKind::kLinearizedGdk:
      return "gdk-linearized";
    case SubroutineKind::kMwu:
      return "mwu";
  }
  return "unknown";
}

// External-regret learner that recommends a point of the body.
class SwapEngine::PointLearner {
 public:
  explicit PointLearner(ScaledOgd ogd) : impl_(std::move(ogd)) {}
  explicit PointLearner(LinearizedGdk gdk) : impl_(std::move(gdk)) {}

  const Vec& current() const {
    return std::visit([](const auto& l) -> const Vec& { return l.current(); }, impl_);
  }
  void Step(const LossSpec& loss, double g) {
    std::visit([&](auto& l) { l.Step(loss, g); }, impl_);
  }
  double last_rate() const {
    return std::visit([](const auto& l) { return l.last_rate(); }, impl_);
  }

 private:
  std::variant<ScaledOgd, LinearizedGdk> impl_;
};

SwapEngine::SwapEngine(std::shared_ptr<const ConvexBody> body,
                       std::shared_ptr<const Discretization> disc,
                       EngineConfig config)
    : body_(std::move(body)), disc_(std::move(disc)), config_(config) {
  if (!body_ || !disc_) throw InvalidInputError("SwapEngine: null input");
  if (body_->dimension() != disc_->dimension()) {
    throw ConfigurationError("SwapEngine: body and discretization dimensions differ");
  }
  const bool mwu = config_.subroutine == SubroutineKind::kMwu;
  if (mwu != (config_.variant == EngineVariant::kBmns)) {
    throw ConfigurationError(
        "SwapEngine: the distribution variant runs exactly the MWU subroutine");
  }
  if (config_.variant == EngineVariant::kBmcs) {
    if (config_.rounding == RoundingRule::kBarycentric && !disc_->has_simplices()) {
      throw ConfigurationError("SwapEngine: barycentric rounding needs simplices");
    }
    if (config_.rounding == RoundingRule::kInterval &&
        !(disc_->is_sorted_chain() || disc_->size() == 1)) {
      throw ConfigurationError("SwapEngine: interval rounding needs a 1D grid");
    }
    if (config_.subroutine == SubroutineKind::kLinearizedGdk &&
        disc_->dimension() != 1) {
      throw ConfigurationError("SwapEngine: linearized descent needs d = 1");
    }
  }
  start_ = disc_->CenterOfMass();
  if (!body_->Contains(start_)) start_ = body_->Project(start_);
  const int k = disc_->size();
  if (config_.variant == EngineVariant::kBmcs) {
    learners_.resize(k);
    default_row_ = Round(config_.rounding, start_, *disc_);
  } else {
    experts_.resize(k);
    default_row_ = MixedAction::FromDense(Vec::Constant(k, 1.0 / k));
  }
}

SwapEngine::~SwapEngine() = default;
SwapEngine::SwapEngine(SwapEngine&&) noexcept = default;

SwapEngine::PointLearner& SwapEngine::LearnerAt(int s) {
  if (!learners_[s]) {
    ScheduleParams p;
    p.alpha = config_.alpha;
    p.lipschitz = config_.lipschitz;
    p.epsilon = config_.nsc_epsilon;
    p.diameter = body_->DiameterBound();
    switch (config_.subroutine) {
      case SubroutineKind::kConvexOgd:
        learners_[s] = std::make_unique<PointLearner>(
            ScaledOgd(body_, StepSchedule::kConvex, p, start_));
        break;
      case SubroutineKind::kGds:
        learners_[s] = std::make_unique<PointLearner>(
            ScaledOgd(body_, StepSchedule::kGds, p, start_));
        break;
      case SubroutineKind::kGdk:
        learners_[s] = std::make_unique<PointLearner>(
            ScaledOgd(body_, StepSchedule::kGdk, p, start_));
        break;
      case SubroutineKind::kLinearizedGdk:
        learners_[s] = std::make_unique<PointLearner>(LinearizedGdk(
            body_, disc_, config_.alpha, config_.lipschitz, start_));
        break;
      case SubroutineKind::kMwu:
        throw ConfigurationError("SwapEngine: MWU is not a point learner");
    }
  }
  return *learners_[s];
}

MixedAction SwapEngine::RowFor(int s) {
  if (config_.variant == EngineVariant::kBmcs) {
    if (!learners_[s]) {
      recommendations_[s] = start_;
      return default_row_;
    }
    recommendations_[s] = learners_[s]->current();
    return Round(config_.rounding, recommendations_[s], *disc_);
  }
  if (!experts_[s]) return default_row_;
  return MixedAction::FromDense(experts_[s]->Distribution());
}

const MixedAction& SwapEngine::Play() {
  if (has_play_) return play_;
  const int k = disc_->size();
  policy_.rows.resize(k);
  if (config_.variant == EngineVariant::kBmcs) recommendations_.resize(k);
  for (int s = 0; s < k; ++s) policy_.rows[s] = RowFor(s);
  StationaryResult st = StationaryDistribution(policy_, config_.stationary);
  play_ = std::move(st.distribution);
  has_play_ = true;
  if (config_.record_trace || observer_) {
    pending_.play = play_;
    pending_.recommendations = recommendations_;
    pending_.rows = policy_.rows;
    pending_.rates.assign(k, 0.0);
    pending_.stationary_residual = st.residual;
  }
  return play_;
}

void SwapEngine::Observe(const LossSpec& loss) {
  if (!has_play_) Play();
  if (loss.dimension() != disc_->dimension()) {
    throw InvalidInputError("SwapEngine: loss dimension mismatch");
  }
  RoundTrace* tr = (config_.record_trace || observer_) ? &pending_ : nullptr;
  if (config_.variant == EngineVariant::kBmcs) {
    for (size_t i = 0; i < play_.support.size(); ++i) {
      const int s = play_.support[i];
      PointLearner& learner = LearnerAt(s);
      learner.Step(loss, std::min(play_.probs[i], 1.0));
      if (tr) tr->rates[s] = learner.last_rate();
    }
  } else {
    const int k = disc_->size();
    std::vector<double> values(k);
    for (int j = 0; j < k; ++j) values[j] = loss.Value(disc_->point(j));
    for (size_t i = 0; i < play_.support.size(); ++i) {
      const int s = play_.support[i];
      if (!experts_[s]) {
        experts_[s] = std::make_unique<Mwu>(k, config_.mwu_rate, config_.mwu_parameter);
      }
      if (tr) tr->rates[s] = experts_[s]->CurrentRate();
      experts_[s]->Step(values, std::min(play_.probs[i], 1.0));
    }
  }
  ++rounds_;
  has_play_ = false;
  if (observer_) observer_(pending_, loss);
  if (config_.record_trace) trace_.push_back(std::move(pending_));
}

MixedAction SwapEngine::BmRound(
    const std::function<LossSpec(const MixedAction&)>& adversary) {
  MixedAction played = Play();
  Observe(adversary(played));
  return played;
}

double SwapEngine::RoundingBound() const {
  return fullswap::RoundingBound(config_.rounding, disc_->kind(),
                                 config_.lipschitz, config_.beta,
                                 disc_->epsilon());
}

int SwapEngine::instantiated() const {
  int n = 0;
  for (const auto& l : learners_) n += l != nullptr;
  for (const auto& e : experts_) n += e != nullptr;
  return n;
}

void SwapEngine::WriteTraceCsv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw InvalidInputError("cannot write " + path);
  out << "t,support_size,support,policy_nnz,max_rate,stationary_residual\n";
  for (size_t t = 0; t < trace_.size(); ++t) {
    const RoundTrace& tr = trace_[t];
    std::ostringstream support;
    for (size_t i = 0; i < tr.play.support.size(); ++i) {
      if (i) support << ';';
      support << tr.play.support[i] << ':' << tr.play.probs[i];
    }
    std::size_t nnz = 0;
    for (const auto& r : tr.rows) nnz += r.support.size();
    double max_rate = 0.0;
    for (double r : tr.rates) max_rate = std::max(max_rate, r);
    out << t + 1 << ',' << tr.play.support.size() << ',' << support.str() << ','
        << nnz << ',' << max_rate << ',' << tr.stationary_residual << '\n';
  }
}

}  // namespace fullswap
