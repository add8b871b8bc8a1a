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
#include <map>

#include "fullswap/calibration.h"

namespace fullswap {

double Forecast::Mean() const {
  double m = 0.0;
  for (size_t i = 0; i < values.size(); ++i) m += values[i] * probs[i];
  return m;
}

void Forecast::Validate(double tol) const {
  if (values.empty() || values.size() != probs.size()) {
    throw InvalidInputError("Forecast: values and probabilities differ");
  }
  double total = 0.0;
  for (size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] >= 0.0 && values[i] <= 1.0)) {
      throw InvalidInputError("Forecast: value outside [0, 1]");
    }
    if (!(probs[i] >= 0.0)) throw InvalidInputError("Forecast: negative mass");
    for (size_t j = 0; j < i; ++j) {
      if (values[i] == values[j]) throw InvalidInputError("Forecast: repeated value");
    }
    total += probs[i];
  }
  if (std::abs(total - 1.0) > tol) {
    throw InvalidInputError("Forecast: probabilities do not sum to one");
  }
}

void CalibrationTranscript::Add(Forecast f, int b) {
  forecasts.push_back(std::move(f));
  outcomes.push_back(b);
}

namespace {

bool OnLattice(double p, double eps) {
  return std::abs(p - eps * std::nearbyint(p / eps)) <= 1e-12;
}

}  // namespace

void CalibrationTranscript::Validate() const {
  if (forecasts.size() != outcomes.size()) {
    throw InvalidInputError("transcript: forecasts and outcomes differ in length");
  }
  for (size_t t = 0; t < forecasts.size(); ++t) {
    forecasts[t].Validate();
    if (outcomes[t] != 0 && outcomes[t] != 1) {
      throw InvalidInputError("transcript: outcome must be binary");
    }
    if (epsilon) {
      for (double p : forecasts[t].values) {
        if (!OnLattice(p, *epsilon)) {
          throw InvalidInputError("transcript: forecast off the lattice");
        }
      }
    }
  }
}

void CalibrationTranscript::WriteCsv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw InvalidInputError("cannot write " + path);
  out.precision(17);
  out << "t,support,probs,b\n";
  for (size_t t = 0; t < forecasts.size(); ++t) {
    out << t + 1 << ',';
    for (size_t i = 0; i < forecasts[t].values.size(); ++i) {
      out << (i ? ";" : "") << forecasts[t].values[i];
    }
    out << ',';
    for (size_t i = 0; i < forecasts[t].probs.size(); ++i) {
      out << (i ? ";" : "") << forecasts[t].probs[i];
    }
    out << ',' << outcomes[t] << '\n';
  }
}

std::vector<CalibrationBucket> Buckets(const CalibrationTranscript& tr) {
  tr.Validate();
  std::map<double, CalibrationBucket> by_value;
  for (size_t t = 0; t < tr.forecasts.size(); ++t) {
    const Forecast& f = tr.forecasts[t];
    for (size_t i = 0; i < f.values.size(); ++i) {
      CalibrationBucket& b = by_value[f.values[i]];
      b.value = f.values[i];
      b.mass += f.probs[i];
      b.outcome_mass += f.probs[i] * tr.outcomes[t];
    }
  }
  std::vector<CalibrationBucket> out;
  for (const auto& [v, b] : by_value) {
    if (b.mass > 0.0) out.push_back(b);
  }
  return out;
}

double L2CalibrationError(const CalibrationTranscript& tr) {
  double cal = 0.0;
  for (const auto& b : Buckets(tr)) {
    const double gap = b.value - b.Frequency();
    cal += b.mass * gap * gap;
  }
  return cal;
}

double RoundToLattice(double b, double eps) {
  if (!(eps > 0)) throw InvalidInputError("lattice step must be positive");
  return std::clamp(eps * std::nearbyint(b / eps), 0.0, 1.0);
}

double DiscretizedCalibrationError(const CalibrationTranscript& tr, double eps) {
  if (!(eps > 0)) throw InvalidInputError("lattice step must be positive");
  double cal = 0.0;
  for (const auto& b : Buckets(tr)) {
    if (!OnLattice(b.value, eps)) {
      throw InvalidInputError("forecast value is not a multiple of eps");
    }
    const double gap = b.value - RoundToLattice(b.Frequency(), eps);
    cal += b.mass * gap * gap;
  }
  return cal;
}

double DiscretizedSwapRegret(const CalibrationTranscript& tr, double eps) {
  double reg = 0.0;
  for (const auto& b : Buckets(tr)) {
    const double f = b.Frequency();
    const double r = RoundToLattice(f, eps);
    reg += b.mass * ((b.value - f) * (b.value - f) - (r - f) * (r - f));
  }
  return reg;
}

Vec CalibrationLearnerEmbedding(double x) { return Vec{{2.0 * x - 1.0, -x * x}}; }

Vec CalibrationAdversaryEmbedding(double b) { return Vec{{b, 1.0}}; }

double SnapToDivisor(double eps) {
  if (!(eps > 0) || eps > 1) throw InvalidInputError("eps must lie in (0, 1]");
  return 1.0 / std::max(1.0, std::round(1.0 / eps));
}

namespace {

bool IsDivisor(double eps) {
  const double inv = 1.0 / eps;
  return std::abs(inv - std::round(inv)) <= 1e-9 * inv;
}

// Shared plumbing: a swap engine over a grid of [0, 1] fed with squared-error
// losses.
class EngineForecaster : public Forecaster {
 public:
  EngineForecaster(std::string name, std::shared_ptr<const Discretization> grid,
                   EngineConfig config)
      : name_(std::move(name)),
        engine_(MakeInterval(0.0, 1.0), grid, config),
        step_(grid->size() > 1 ? grid->point(1)[0] - grid->point(0)[0] : 1.0) {}

  Forecast NextForecast() override {
    const MixedAction& a = engine_.Play();
    Forecast f;
    for (size_t i = 0; i < a.support.size(); ++i) {
      f.values.push_back(engine_.discretization().point(a.support[i])[0]);
      f.probs.push_back(a.probs[i]);
    }
    return f;
  }
  void Observe(int b) override {
    if (b != 0 && b != 1) throw InvalidInputError("outcome must be binary");
    engine_.Observe(MakeCalibrationLoss(b));
  }
  std::string name() const override { return name_; }
  double grid_step() const override { return step_; }
  SwapEngine* mutable_engine() override { return &engine_; }

 private:
  std::string name_;
  SwapEngine engine_;
  double step_;
};

class RoundedForecaster : public Forecaster {
 public:
  RoundedForecaster(std::unique_ptr<Forecaster> inner, double eps)
      : inner_(std::move(inner)), eps_(eps) {}

  Forecast NextForecast() override {
    const Forecast raw = inner_->NextForecast();
    std::map<double, double> merged;
    for (size_t i = 0; i < raw.values.size(); ++i) {
      merged[RoundToLattice(raw.values[i], eps_)] += raw.probs[i];
    }
    Forecast f;
    for (const auto& [v, p] : merged) {
      f.values.push_back(v);
      f.probs.push_back(p);
    }
    return f;
  }
  void Observe(int b) override { inner_->Observe(b); }
  std::string name() const override { return "rounded-l2"; }
  double grid_step() const override { return eps_; }

 private:
  std::unique_ptr<Forecaster> inner_;
  double eps_;
};

}  // namespace

std::unique_ptr<Forecaster> MakeL2Forecaster(std::int64_t horizon) {
  if (horizon < 1) throw InvalidInputError("horizon must be at least 1");
  const TableConfiguration table =
      ConfigureFromTable(LossClass::kScSmooth, 1, horizon, 2.0, 2.0);
  auto grid = std::make_shared<const Discretization>(
      BuildIntervalGrid(0.0, 1.0, table.epsilon));
  EngineConfig config = MakeEngineConfig(table, 2.0, 2.0, 2.0, 1.0);
  // In one dimension barycentric rounding is the two-point interval split.
  config.rounding = RoundingRule::kInterval;
  return std::make_unique<EngineForecaster>("l2", grid, config);
}

std::unique_ptr<Forecaster> MakeDiscretizedForecaster(std::int64_t horizon,
                                                      double eps) {
  if (horizon < 1) throw InvalidInputError("horizon must be at least 1");
  if (!(eps > 0 && eps <= 1) || !IsDivisor(eps)) {
    throw InvalidInputError("1/eps must be an integer");
  }
  auto grid = std::make_shared<const Discretization>(BuildIntervalGrid(0.0, 1.0, eps));
  EngineConfig config;
  config.variant = EngineVariant::kBmcs;
  config.subroutine = SubroutineKind::kLinearizedGdk;
  config.rounding = RoundingRule::kInterval;
  config.lipschitz = 2.0;
  config.alpha = 2.0;
  config.beta = 2.0;
  return std::make_unique<EngineForecaster>("discretized", grid, config);
}

std::unique_ptr<Forecaster> MakeRoundedForecaster(std::int64_t horizon, double eps) {
  if (!(eps > 0 && eps <= 1) || !IsDivisor(eps)) {
    throw InvalidInputError("1/eps must be an integer");
  }
  return std::make_unique<RoundedForecaster>(MakeL2Forecaster(horizon), eps);
}

std::unique_ptr<Forecaster> MakeLatticeMwuForecaster(std::int64_t horizon,
                                                     double eps) {
  if (horizon < 1) throw InvalidInputError("horizon must be at least 1");
  if (!(eps > 0 && eps <= 1) || !IsDivisor(eps)) {
    throw InvalidInputError("1/eps must be an integer");
  }
  auto grid = std::make_shared<const Discretization>(BuildIntervalGrid(0.0, 1.0, eps));
  EngineConfig config;
  config.variant = EngineVariant::kBmns;
  config.subroutine = SubroutineKind::kMwu;
  config.rounding = RoundingRule::kProjection;
  config.lipschitz = 2.0;
  config.mwu_rate = MwuRate::kAdaptive;
  config.mwu_parameter = 1.0;  // squared errors lie in [0, 1]
  return std::make_unique<EngineForecaster>("lattice-mwu", grid, config);
}

}  // namespace fullswap
