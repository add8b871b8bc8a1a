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

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "fullswap/harness.h"

namespace fullswap {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const std::set<std::string>& Scenarios() {
  static const std::set<std::string> kScenarios = {
      "calibration", "discretized-calibration", "structured-game", "oco-envelope",
      "swap-decomposition"};
  return kScenarios;
}

std::string DefaultLossClass(const std::string& scenario) {
  if (scenario == "structured-game") return "linear";
  return "sc-smooth";
}

// Schedule parameters of the point learners an engine runs, if any.
std::optional<std::pair<StepSchedule, ScheduleParams>> SubroutineParams(
    const SwapEngine& engine) {
  const EngineConfig& c = engine.config();
  ScheduleParams p;
  p.alpha = c.alpha;
  p.lipschitz = c.lipschitz;
  p.diameter = engine.body().DiameterBound();
  switch (c.subroutine) {
    case SubroutineKind::kConvexOgd:
      return std::make_pair(StepSchedule::kConvex, p);
    case SubroutineKind::kGds:
      return std::make_pair(StepSchedule::kGds, p);
    case SubroutineKind::kGdk:
      p.epsilon = c.nsc_epsilon;
      return std::make_pair(StepSchedule::kGdk, p);
    case SubroutineKind::kLinearizedGdk: {
      const Discretization& grid = engine.discretization();
      double gap = 0.0;
      for (int i = 1; i < grid.size(); ++i) {
        gap = std::max(gap, grid.point(i)[0] - grid.point(i - 1)[0]);
      }
      p.epsilon = gap;
      return std::make_pair(StepSchedule::kGdk, p);
    }
    case SubroutineKind::kMwu:
      return std::nullopt;
  }
  return std::nullopt;
}

// Streams the per-point regrets Reg_s of a running engine from its public
// round record. Losses must carry a quadratic form.
class DecompositionMonitor {
 public:
  explicit DecompositionMonitor(const SwapEngine& engine)
      : engine_(engine),
        points_(engine.discretization().points()),
        tracker_(points_, std::shared_ptr<const ConvexBody>(&engine.body(),
                                                            [](const ConvexBody*) {})),
        schedule_(SubroutineParams(engine)),
        delta_(engine.RoundingBound()) {}

  void operator()(const RoundTrace& tr, const LossSpec& loss) {
    if (!loss.quadratic()) throw UnsupportedError("monitor needs quadratic losses");
    const IsotropicQuadratic& q = *loss.quadratic();
    const bool continuous = engine_.config().variant == EngineVariant::kBmcs;
    for (size_t i = 0; i < tr.play.support.size(); ++i) {
      const int s = tr.play.support[i];
      const double x = tr.play.probs[i];
      if (x <= 0.0) continue;
      double row_value = 0.0;
      const MixedAction& row = tr.rows[s];
      for (size_t j = 0; j < row.support.size(); ++j) {
        row_value += row.probs[j] * q.Value(points_[row.support[j]]);
      }
      if (continuous) {
        const double at_recommendation = q.Value(tr.recommendations[s]);
        tracker_.AddValue(s, x, loss, at_recommendation);
        rounding_ += x * (row_value - at_recommendation);
      } else {
        tracker_.AddValue(s, x, loss, row_value);
      }
    }
    max_residual_ = std::max(max_residual_, tr.stationary_residual);
    ++rounds_;
  }

  double SumRegS() const {
    const bool continuous = engine_.config().variant == EngineVariant::kBmcs;
    double total = 0.0;
    for (int s = 0; s < tracker_.size(); ++s) {
      if (tracker_.Mass(s) <= 0.0) continue;
      const double best =
          continuous ? tracker_.Comparator(s) : tracker_.ComparatorOver(s, points_);
      total += tracker_.Incurred(s) - best;
    }
    return total;
  }

  // delta * t plus the subroutine envelopes at each point's scale total.
  double Envelope() const {
    if (!schedule_) return kNaN;
    double total = DeltaT();
    for (int s = 0; s < tracker_.size(); ++s) {
      const double g = tracker_.Mass(s);
      if (g > 0.0) total += RegretEnvelope(schedule_->first, schedule_->second, g);
    }
    return total;
  }

  double DeltaT() const { return delta_ * static_cast<double>(rounds_); }
  double measured_rounding() const { return rounding_; }
  double max_residual() const { return max_residual_; }
  double delta() const { return delta_; }

 private:
  const SwapEngine& engine_;
  std::vector<Vec> points_;
  QuadraticRegretTracker tracker_;
  std::optional<std::pair<StepSchedule, ScheduleParams>> schedule_;
  double delta_;
  double rounding_ = 0.0;
  double max_residual_ = 0.0;
  std::int64_t rounds_ = 0;
};

StepSchedule ScheduleForClass(const std::string& cls) {
  const LossClass c = LossClassFromString(cls);
  switch (c) {
    case LossClass::kStronglyConvex:
    case LossClass::kScSmooth:
      return StepSchedule::kGds;
    case LossClass::kNsc:
      return StepSchedule::kGdk;
    case LossClass::kConvex:
    case LossClass::kLinear:
      return StepSchedule::kConvex;
    default:
      throw ConfigurationError("oco-envelope: no step schedule for loss class " + cls);
  }
}

void RecordCheckpoint(RegretReport& report, std::int64_t t, double cum_regret,
                      const DecompositionMonitor* monitor) {
  SeriesPoint p;
  p.t = t;
  p.cum_regret = cum_regret;
  if (monitor) {
    p.bound_envelope = monitor->Envelope();
    p.delta_t = monitor->DeltaT();
    p.sum_reg_s = monitor->SumRegS();
  } else {
    p.bound_envelope = kNaN;
    p.delta_t = kNaN;
    p.sum_reg_s = kNaN;
  }
  report.series.push_back(p);
}

void FinishDecomposition(RegretReport& report, const DecompositionMonitor& monitor,
                         double full_swap_regret) {
  const double sum_reg = monitor.SumRegS();
  report.metrics["delta"] = monitor.delta();
  report.metrics["delta_T"] = monitor.DeltaT();
  report.metrics["sum_reg_s"] = sum_reg;
  report.metrics["measured_rounding_loss"] = monitor.measured_rounding();
  report.metrics["max_stationary_residual"] = monitor.max_residual();
  report.flags["decomposition_holds"] =
      full_swap_regret <= monitor.DeltaT() + sum_reg + 1e-6;
  const double envelope = monitor.Envelope();
  report.metrics["bound_envelope"] = envelope;
  if (!std::isnan(envelope)) {
    report.flags["within_bound_envelope"] = full_swap_regret <= envelope + 1e-6;
  }
}

void RunCalibrationScenario(const ExperimentConfig& cfg, RegretReport& report) {
  std::unique_ptr<Forecaster> forecaster;
  double eps = 0.0;
  if (cfg.scenario == "calibration") {
    forecaster = MakeL2Forecaster(cfg.horizon);
  } else {
    eps = SnapToDivisor(cfg.epsilon.value_or(std::pow(double(cfg.horizon), -1.0 / 3.0)));
    if (cfg.algorithm == "discretized") {
      forecaster = MakeDiscretizedForecaster(cfg.horizon, eps);
    } else if (cfg.algorithm == "rounded") {
      forecaster = MakeRoundedForecaster(cfg.horizon, eps);
    } else if (cfg.algorithm == "lattice-mwu") {
      forecaster = MakeLatticeMwuForecaster(cfg.horizon, eps);
    } else {
      throw ConfigurationError("unknown algorithm: " + cfg.algorithm);
    }
    report.metrics["epsilon"] = eps;
  }
  auto adversary = MakeBitAdversary(cfg.adversary, cfg.seed);
  std::unique_ptr<DecompositionMonitor> monitor;
  if (SwapEngine* engine = forecaster->mutable_engine()) {
    monitor = std::make_unique<DecompositionMonitor>(*engine);
    engine->SetObserver(
        [m = monitor.get()](const RoundTrace& tr, const LossSpec& l) { (*m)(tr, l); });
  }
  const std::vector<std::int64_t> checkpoints = Checkpoints(cfg.horizon, cfg.checkpoints);
  size_t next = 0;
  CalibrationTranscript tr;
  if (eps > 0) tr.epsilon = eps;
  tr.forecasts.reserve(cfg.horizon);
  tr.outcomes.reserve(cfg.horizon);
  for (std::int64_t t = 1; t <= cfg.horizon; ++t) {
    Forecast f = forecaster->NextForecast();
    const int b = adversary->Next(f);
    forecaster->Observe(b);
    tr.Add(std::move(f), b);
    if (next < checkpoints.size() && checkpoints[next] == t) {
      const double value = eps > 0 ? DiscretizedCalibrationError(tr, eps)
                                   : CalibrationFullSwapRegret(tr);
      RecordCheckpoint(report, t, value, monitor.get());
      ++next;
    }
  }
  const double cal = L2CalibrationError(tr);
  const double fsr = CalibrationFullSwapRegret(tr);
  report.metrics["calibration_error"] = cal;
  report.metrics["full_swap_regret"] = fsr;
  report.metrics["identity_gap"] = std::abs(cal - fsr);
  report.metrics["final_mean_forecast"] = tr.forecasts.back().Mean();
  report.flags["calibration_identity"] = std::abs(cal - fsr) <= 1e-9;
  if (eps > 0) {
    report.metrics["discretized_calibration_error"] = DiscretizedCalibrationError(tr, eps);
    report.metrics["discretized_swap_regret"] = DiscretizedSwapRegret(tr, eps);
  }
  if (monitor) FinishDecomposition(report, *monitor, fsr);
}

std::vector<Vec> PointsOf(const SwapEngine& engine) {
  return engine.discretization().points();
}

void RunGameScenario(const ExperimentConfig& cfg, const std::string& loss_class,
                     RegretReport& report) {
  StructuredGame game;
  if (!cfg.game_file.empty()) {
    std::ifstream in(cfg.game_file);
    if (!in) throw ConfigurationError("cannot read game file " + cfg.game_file);
    game = StructuredGame::FromJson(nlohmann::json::parse(in));
  } else {
    game = RandomStructuredGame(cfg.actions, cfg.dimension, cfg.seed);
  }
  game.Validate();
  const LossClass cls = LossClassFromString(loss_class);
  const bool self_play = cfg.adversary == "self-play";
  StructuredLearner learner = MakeStructuredLearner(game.v, cfg.horizon, cls);
  std::optional<StructuredLearner> opponent;
  std::unique_ptr<GameAdversary> adversary;
  if (self_play) {
    opponent.emplace(
        MakeStructuredLearner(game.AdversaryColumnEmbeddings(), cfg.horizon, cls));
  } else {
    adversary = MakeGameAdversary(cfg.adversary, cfg.seed);
  }
  DecompositionMonitor monitor(learner.engine());
  learner.mutable_engine().SetObserver(
      [&monitor](const RoundTrace& tr, const LossSpec& l) { monitor(tr, l); });
  QuadraticRegretTracker running(PointsOf(learner.engine()),
                                 std::shared_ptr<const ConvexBody>(
                                     &learner.body(), [](const ConvexBody*) {}));
  const std::vector<Vec> row_embeddings = game.AdversaryRowEmbeddings();
  const std::vector<std::int64_t> checkpoints = Checkpoints(cfg.horizon, cfg.checkpoints);
  size_t next = 0;
  GameTranscript tr;
  for (std::int64_t t = 1; t <= cfg.horizon; ++t) {
    const Vec p = learner.NextStrategy();
    const Vec q = self_play ? opponent->NextStrategy() : adversary->Next(p, game);
    learner.Observe(Embed(q, game.w));
    if (self_play) opponent->Observe(Embed(p, row_embeddings));
    tr.p.push_back(p);
    tr.q.push_back(q);
    const MixedAction& play = learner.plays().back();
    for (size_t i = 0; i < play.support.size(); ++i) {
      running.Add(play.support[i], play.probs[i], learner.losses().back());
    }
    if (next < checkpoints.size() && checkpoints[next] == t) {
      RecordCheckpoint(report, t, running.Total(), &monitor);
      ++next;
    }
  }
  const double fsr = FullSwapRegret(learner.plays(), learner.losses(),
                                    PointsOf(learner.engine()), learner.body());
  const double swap = SwapRegret(tr, game);
  const auto [gap_l, gap_a] = CorrelatedEqGap(EmpiricalJoint(tr), game);
  const double T = static_cast<double>(cfg.horizon);
  report.metrics["full_swap_regret"] = fsr;
  report.metrics["swap_regret"] = swap;
  report.metrics["adversary_swap_regret"] = AdversarySwapRegret(tr, game);
  report.metrics["learner_gap"] = gap_l;
  report.metrics["adversary_gap"] = gap_a;
  report.metrics["learner_scale"] = game.learner_scale;
  report.flags["swap_le_full_swap"] = swap <= fsr + 1e-6;
  report.flags["gap_le_average_full_swap"] = gap_l <= fsr / T + 1e-6;
  if (self_play) {
    const double fsr_a =
        FullSwapRegret(opponent->plays(), opponent->losses(),
                       PointsOf(opponent->engine()), opponent->body());
    report.metrics["adversary_full_swap_regret"] = fsr_a;
    report.flags["adversary_gap_le_average_full_swap"] = gap_a <= fsr_a / T + 1e-6;
  }
  FinishDecomposition(report, monitor, fsr);
}

void RunOcoScenario(const ExperimentConfig& cfg, const std::string& loss_class,
                    RegretReport& report) {
  OcoCase c;
  c.schedule = ScheduleForClass(loss_class);
  c.dimension = cfg.dimension;
  c.pattern = static_cast<int>(cfg.seed % kOcoPatterns);
  c.seed = cfg.seed;
  c.horizon = cfg.horizon;
  const OcoRun run = RunOcoCase(c);
  for (std::int64_t t : Checkpoints(cfg.horizon, cfg.checkpoints)) {
    SeriesPoint p;
    p.t = t;
    p.cum_regret = run.prefix_regret[t - 1];
    p.bound_envelope = run.prefix_bound[t - 1];
    p.delta_t = 0.0;
    p.sum_reg_s = p.cum_regret;
    report.series.push_back(p);
  }
  report.metrics["pattern"] = c.pattern;
  report.metrics["final_regret"] = run.prefix_regret.back();
  report.metrics["final_bound"] = run.prefix_bound.back();
  report.metrics["worst_excess"] = run.worst_excess;
  report.flags["within_bound_envelope"] = run.worst_excess <= 1e-6;
}

void RunDecompositionScenario(const ExperimentConfig& cfg, const std::string& loss_class,
                              RegretReport& report) {
  const int d = cfg.dimension;
  const LossClass cls = LossClassFromString(loss_class);
  auto body = MakeUnitCube(d);
  const double curvature = 1.0;
  const double lipschitz = curvature * std::sqrt(double(d));
  const TableConfiguration table =
      ConfigureFromTable(cls, d, cfg.horizon, lipschitz, curvature);
  auto disc = std::make_shared<const Discretization>(BuildDiscretization(*body, table));
  const double range = 0.5 * curvature * d;
  SwapEngine engine(body, disc,
                    MakeEngineConfig(table, lipschitz, curvature, curvature, range));
  DecompositionMonitor monitor(engine);
  engine.SetObserver([&monitor](const RoundTrace& tr, const LossSpec& l) { monitor(tr, l); });
  std::mt19937_64 rng = MakeRng(cfg.seed, 7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const bool adaptive = cfg.adversary.rfind("adaptive", 0) == 0;
  std::vector<MixedAction> plays;
  std::vector<LossSpec> losses;
  QuadraticRegretTracker running(disc->points(), body);
  const std::vector<std::int64_t> checkpoints = Checkpoints(cfg.horizon, cfg.checkpoints);
  size_t next = 0;
  const Vec middle = Vec::Constant(d, 0.5);
  for (std::int64_t t = 1; t <= cfg.horizon; ++t) {
    const MixedAction play = engine.Play();
    Vec center(d);
    if (adaptive) {
      // Reflect the mean play through the middle of the cube.
      center = body->Project(2.0 * middle - play.Mean(*disc));
    } else {
      for (int i = 0; i < d; ++i) center[i] = unit(rng);
    }
    LossSpec loss = cls == LossClass::kLinear || cls == LossClass::kConcave
                        ? MakeLinearLoss((center - middle) * (1.0 / std::sqrt(double(d))), *body)
                        : MakeQuadraticLoss(center, curvature, *body);
    engine.Observe(loss);
    for (size_t i = 0; i < play.support.size(); ++i) {
      running.Add(play.support[i], play.probs[i], loss);
    }
    plays.push_back(play);
    losses.push_back(std::move(loss));
    if (next < checkpoints.size() && checkpoints[next] == t) {
      RecordCheckpoint(report, t, running.Total(), &monitor);
      ++next;
    }
  }
  const double fsr = FullSwapRegret(plays, losses, disc->points(), *body);
  report.metrics["full_swap_regret"] = fsr;
  report.metrics["discretization_size"] = disc->size();
  report.metrics["epsilon"] = disc->epsilon();
  FinishDecomposition(report, monitor, fsr);
}

std::string FormatDouble(double v) {
  if (std::isnan(v)) return "nan";
  std::ostringstream out;
  out << std::setprecision(17) << v;
  return out.str();
}

}  // namespace

// ---------------------------------------------------------------------------

std::vector<std::int64_t> Checkpoints(std::int64_t horizon, int count) {
  if (horizon < 1) throw InvalidInputError("checkpoints: horizon must be at least 1");
  std::set<std::int64_t> out = {horizon};
  const int n = std::max(1, count);
  for (int i = 0; i < n; ++i) {
    const double frac = n == 1 ? 1.0 : double(i) / (n - 1);
    out.insert(std::clamp<std::int64_t>(
        std::llround(std::pow(double(horizon), frac)), 1, horizon));
  }
  return {out.begin(), out.end()};
}

std::string ContentHash(const std::string& bytes) {
  const std::string header = "blob " + std::to_string(bytes.size()) + '\0';
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx) throw NumericalError("sha1: context allocation failed");
  const bool ok = EVP_DigestInit_ex(ctx, EVP_sha1(), nullptr) == 1 &&
                  EVP_DigestUpdate(ctx, header.data(), header.size()) == 1 &&
                  EVP_DigestUpdate(ctx, bytes.data(), bytes.size()) == 1 &&
                  EVP_DigestFinal_ex(ctx, digest, &length) == 1;
  EVP_MD_CTX_free(ctx);
  if (!ok) throw NumericalError("sha1: digest failed");
  std::ostringstream hex;
  for (unsigned int i = 0; i < length; ++i) {
    hex << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  }
  return hex.str();
}

ExperimentConfig ExperimentConfig::FromJson(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigurationError("config must be a JSON object");
  static const std::set<std::string> kKeys = {
      "scenario", "T", "d", "loss_class", "eps", "adversary", "seed",
      "algorithm", "actions", "game_file", "checkpoints", "out"};
  for (const auto& [key, value] : j.items()) {
    if (!kKeys.count(key)) throw ConfigurationError("unknown config key: " + key);
  }
  ExperimentConfig c;
  try {
    c.scenario = j.value("scenario", c.scenario);
    c.horizon = j.value("T", c.horizon);
    c.dimension = j.value("d", c.dimension);
    c.loss_class = j.value("loss_class", c.loss_class);
    if (j.contains("eps") && !j["eps"].is_null()) c.epsilon = j["eps"].get<double>();
    c.adversary = j.value("adversary", c.adversary);
    c.seed = j.value("seed", c.seed);
    c.algorithm = j.value("algorithm", c.algorithm);
    c.actions = j.value("actions", c.actions);
    c.game_file = j.value("game_file", c.game_file);
    c.checkpoints = j.value("checkpoints", c.checkpoints);
    c.out = j.value("out", c.out);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigurationError(std::string("config: ") + e.what());
  }
  c.Validate();
  return c;
}

nlohmann::json ExperimentConfig::ToJson() const {
  nlohmann::json j = {{"scenario", scenario}, {"T", horizon},
                      {"d", dimension},       {"loss_class", loss_class},
                      {"adversary", adversary}, {"seed", seed},
                      {"algorithm", algorithm}, {"actions", actions},
                      {"game_file", game_file}, {"checkpoints", checkpoints}};
  j["eps"] = epsilon ? nlohmann::json(*epsilon) : nlohmann::json(nullptr);
  return j;
}

void ExperimentConfig::Validate() const {
  if (!Scenarios().count(scenario)) throw ConfigurationError("unknown scenario: " + scenario);
  if (horizon < 1) throw ConfigurationError("T must be at least 1");
  if (dimension < 1) throw ConfigurationError("d must be at least 1");
  if (epsilon && !(*epsilon > 0.0 && *epsilon <= 1.0)) {
    throw ConfigurationError("eps must lie in (0, 1]");
  }
  if (actions < 1) throw ConfigurationError("actions must be at least 1");
  if (checkpoints < 1) throw ConfigurationError("checkpoints must be at least 1");
  if (!loss_class.empty()) LossClassFromString(loss_class);
}

nlohmann::json RegretReport::ToJson(bool include_wall_clock) const {
  nlohmann::json j;
  j["config"] = config.ToJson();
  j["input_hash"] = input_hash;
  nlohmann::json metrics_json = nlohmann::json::object();
  for (const auto& [k, v] : metrics) {
    metrics_json[k] = std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
  }
  j["metrics"] = metrics_json;
  j["flags"] = flags;
  j["checkpoints"] = series.size();
  if (!series.empty()) j["final_cum_regret"] = series.back().cum_regret;
  if (include_wall_clock) j["wall_clock_seconds"] = wall_clock_seconds;
  return j;
}

RegretReport RunExperiment(const ExperimentConfig& config) {
  config.Validate();
  const auto start = std::chrono::steady_clock::now();
  RegretReport report;
  report.config = config;
  const std::string loss_class =
      config.loss_class.empty() ? DefaultLossClass(config.scenario) : config.loss_class;
  std::string inputs = config.ToJson().dump();
  if (!config.game_file.empty()) {
    std::ifstream in(config.game_file, std::ios::binary);
    if (!in) throw ConfigurationError("cannot read game file " + config.game_file);
    inputs += std::string(std::istreambuf_iterator<char>(in), {});
  }
  report.input_hash = ContentHash(inputs);
  try {
    if (config.scenario == "calibration" || config.scenario == "discretized-calibration") {
      RunCalibrationScenario(config, report);
    } else if (config.scenario == "structured-game") {
      RunGameScenario(config, loss_class, report);
    } else if (config.scenario == "oco-envelope") {
      RunOcoScenario(config, loss_class, report);
    } else {
      RunDecompositionScenario(config, loss_class, report);
    }
  } catch (const Error& e) {
    throw ConfigurationError("experiment " + config.ToJson().dump() + ": " + e.what());
  }
  report.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!config.out.empty()) {
    WriteSeriesCsv(report, config.out + ".csv");
    WriteReportJson(report, config.out + ".json");
  }
  return report;
}

void WriteSeriesCsv(const RegretReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidInputError("cannot write " + path);
  out << "t,cum_regret,bound_envelope,delta_T,sum_reg_s\n";
  for (const SeriesPoint& p : report.series) {
    out << p.t << ',' << FormatDouble(p.cum_regret) << ','
        << FormatDouble(p.bound_envelope) << ',' << FormatDouble(p.delta_t) << ','
        << FormatDouble(p.sum_reg_s) << '\n';
  }
}

void WriteReportJson(const RegretReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidInputError("cannot write " + path);
  out << report.ToJson().dump(2) << '\n';
}

CalibrationTranscript PlayCalibration(Forecaster& forecaster, BitAdversary& adversary,
                                      std::int64_t horizon) {
  CalibrationTranscript tr;
  tr.forecasts.reserve(horizon);
  tr.outcomes.reserve(horizon);
  for (std::int64_t t = 0; t < horizon; ++t) {
    Forecast f = forecaster.NextForecast();
    const int b = adversary.Next(f);
    forecaster.Observe(b);
    tr.Add(std::move(f), b);
  }
  return tr;
}

std::vector<SweepRow> RunDiscretizedSweep(const std::vector<std::int64_t>& horizons,
                                          const std::vector<double>& inverse_exponents,
                                          const std::string& adversary,
                                          std::uint64_t seed) {
  std::vector<SweepRow> rows;
  for (std::int64_t T : horizons) {
    for (double a : inverse_exponents) {
      const double eps = SnapToDivisor(std::pow(double(T), -1.0 / a));
      for (const char* name : {"discretized", "rounded", "lattice-mwu"}) {
        std::unique_ptr<Forecaster> f;
        const std::string algorithm = name;
        if (algorithm == "discretized") {
          f = MakeDiscretizedForecaster(T, eps);
        } else if (algorithm == "rounded") {
          f = MakeRoundedForecaster(T, eps);
        } else {
          f = MakeLatticeMwuForecaster(T, eps);
        }
        auto adv = MakeBitAdversary(adversary, seed);
        const CalibrationTranscript tr = PlayCalibration(*f, *adv, T);
        SweepRow row;
        row.algorithm = algorithm;
        row.horizon = T;
        row.epsilon = eps;
        row.discretized_calibration = DiscretizedCalibrationError(tr, eps);
        row.discretized_swap_regret = DiscretizedSwapRegret(tr, eps);
        row.calibration = L2CalibrationError(tr);
        rows.push_back(row);
      }
    }
  }
  return rows;
}

void WriteSweepCsv(const std::vector<SweepRow>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidInputError("cannot write " + path);
  out << "algorithm,T,eps,disc_cal,disc_swap_regret,cal\n";
  for (const SweepRow& r : rows) {
    out << r.algorithm << ',' << r.horizon << ',' << FormatDouble(r.epsilon) << ','
        << FormatDouble(r.discretized_calibration) << ','
        << FormatDouble(r.discretized_swap_regret) << ',' << FormatDouble(r.calibration)
        << '\n';
  }
}

// ---------------------------------------------------------------------------
// Self-play.

StructuredGame RandomStructuredGame(int n, int d, std::uint64_t seed) {
  if (n < 1 || d < 1) throw InvalidInputError("random game: n and d must be positive");
  std::mt19937_64 rng = MakeRng(seed, 11);
  auto ball = MakeUnitBall(d);
  auto draw = [&](int count) {
    std::vector<Vec> out;
    for (int i = 0; i < count; ++i) out.push_back(SampleUniform(*ball, rng));
    return out;
  };
  StructuredGame g;
  g.v = draw(n);
  g.w = draw(n);
  g.v_prime = draw(n);
  g.w_prime = draw(n);
  return g;
}

SelfPlayResult RunSelfPlay(const StructuredGame& game, std::int64_t horizon,
                           LossClass row) {
  game.Validate();
  StructuredLearner learner = MakeStructuredLearner(game.v, horizon, row);
  StructuredLearner opponent =
      MakeStructuredLearner(game.AdversaryColumnEmbeddings(), horizon, row);
  const std::vector<Vec> row_embeddings = game.AdversaryRowEmbeddings();
  SelfPlayResult r;
  for (std::int64_t t = 0; t < horizon; ++t) {
    const Vec p = learner.NextStrategy();
    const Vec q = opponent.NextStrategy();
    learner.Observe(Embed(q, game.w));
    opponent.Observe(Embed(p, row_embeddings));
    r.transcript.p.push_back(p);
    r.transcript.q.push_back(q);
  }
  r.learner_swap_regret = SwapRegret(r.transcript, game);
  r.adversary_swap_regret = AdversarySwapRegret(r.transcript, game);
  r.learner_full_swap_regret =
      FullSwapRegret(learner.plays(), learner.losses(),
                     learner.engine().discretization().points(), learner.body());
  r.adversary_full_swap_regret =
      FullSwapRegret(opponent.plays(), opponent.losses(),
                     opponent.engine().discretization().points(), opponent.body());
  std::tie(r.learner_gap, r.adversary_gap) =
      CorrelatedEqGap(EmpiricalJoint(r.transcript), game);
  return r;
}

// ---------------------------------------------------------------------------
// Online convex optimization envelope runs.

namespace {

struct OcoSetup {
  std::shared_ptr<const ConvexBody> body;
  Vec middle;
  double body_radius = 0.0;
  double center_radius = 0.0;
};

Vec Away(const Vec& x, const Vec& middle) {
  Vec dir = x - middle;
  const double n = dir.norm();
  if (n < 1e-12) return Vec::Unit(x.size(), 0);
  return dir / n;
}

}  // namespace

OcoRun RunOcoCase(const OcoCase& c) {
  if (c.dimension < 1 || c.dimension > 2) {
    throw UnsupportedError("oco envelope runs cover d in {1, 2}");
  }
  if (c.horizon < 1) throw InvalidInputError("oco: horizon must be at least 1");
  if (c.pattern < 0 || c.pattern >= kOcoPatterns) {
    throw InvalidInputError("oco: unknown pattern");
  }
  const int d = c.dimension;
  OcoSetup s;
  if (d == 1) {
    s.body = MakeInterval(0.0, 1.0);
    s.middle = Vec::Constant(1, 0.5);
    s.body_radius = 0.5;
  } else {
    s.body = MakeUnitBall(2);
    s.middle = Vec::Zero(2);
    s.body_radius = 1.0;
  }
  const bool outside = c.pattern == 6;
  s.center_radius = outside ? 2.0 * s.body_radius : s.body_radius;
  const double alpha = 1.0;
  const double max_curvature = 2.0 * alpha;
  ScheduleParams params;
  params.alpha = c.schedule == StepSchedule::kConvex ? 0.0 : alpha;
  params.lipschitz = max_curvature * (s.center_radius + s.body_radius);
  params.diameter = s.body->DiameterBound();
  // Odd patterns in one dimension feed linearized losses to the GDK schedule.
  std::shared_ptr<const Discretization> grid;
  if (c.schedule == StepSchedule::kGdk) {
    params.epsilon = 0.05;
    if (d == 1 && c.pattern % 2 == 1) {
      grid = std::make_shared<const Discretization>(BuildIntervalGrid(0.0, 1.0, 0.05));
    }
  }
  const bool linear = c.schedule == StepSchedule::kConvex && c.pattern % 2 == 0;

  std::mt19937_64 rng = MakeRng(c.seed, 100 + c.pattern);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto center_ball = MakeBall(s.middle, s.center_radius);
  auto random_center = [&]() {
    if (outside) {
      Vec dir(d);
      std::normal_distribution<double> normal(0.0, 1.0);
      for (int i = 0; i < d; ++i) dir[i] = normal(rng);
      return Vec(s.middle + s.center_radius * dir / std::max(dir.norm(), 1e-12));
    }
    return SampleUniform(*center_ball, rng);
  };

  ScaledOgd learner(s.body, c.schedule, params, s.middle);
  QuadraticRegretTracker tracker({s.middle}, s.body);
  std::vector<double> knot_totals;
  if (grid) knot_totals.assign(grid->size(), 0.0);
  double knot_incurred = 0.0;
  double scale_total = 0.0;

  OcoRun run;
  run.params = params;
  run.prefix_regret.reserve(c.horizon);
  run.prefix_bound.reserve(c.horizon);
  run.worst_excess = -std::numeric_limits<double>::infinity();
  const double T = static_cast<double>(c.horizon);
  for (std::int64_t t = 1; t <= c.horizon; ++t) {
    const Vec& x = learner.current();
    const Vec far = s.middle - s.center_radius * Away(x, s.middle);
    double g = 1.0;
    Vec center;
    double curvature = alpha;
    switch (c.pattern) {
      case 0:
        g = unit(rng);
        center = random_center();
        curvature = alpha * (1.0 + unit(rng));
        break;
      case 1:
        center = far;
        break;
      case 2:
        center = s.middle + (t % 2 ? 1.0 : -1.0) * s.center_radius * Vec::Unit(d, 0);
        g = t % 2 ? 1.0 : 0.5;
        break;
      case 3:
        g = (t / 50) % 2 ? 1e-3 : 1.0;
        center = random_center();
        break;
      case 4:
        g = unit(rng) < 0.5 ? 0.0 : 1.0;
        center = far;
        break;
      case 5:
        g = 1.0 / static_cast<double>(t);
        center = far;
        break;
      case 6:
        g = unit(rng);
        center = random_center();
        break;
      default:
        g = static_cast<double>(t) / T;
        center = far;
        curvature = max_curvature;
        break;
    }
    LossSpec loss;
    if (linear) {
      // Gradient pointing at the current play, at full Lipschitz strength.
      const Vec direction = c.pattern == 0 ? Away(random_center(), s.middle)
                                           : Away(x, s.middle);
      loss = MakeLinearLoss(params.lipschitz * direction, *s.body);
    } else {
      loss = MakeQuadraticLoss(center, curvature, *s.body);
    }
    double regret = 0.0;
    if (grid) {
      const LossSpec flat = PiecewiseLinearize(loss, *grid);
      const Vec played = learner.Step(flat, g);
      knot_incurred += g * flat.Value(played);
      for (int k = 0; k < grid->size(); ++k) knot_totals[k] += g * flat.Value(grid->point(k));
      regret = knot_incurred - *std::min_element(knot_totals.begin(), knot_totals.end());
    } else {
      const Vec played = learner.Step(loss, g);
      tracker.AddAt(0, g, loss, played);
      regret = tracker.Total();
    }
    scale_total += g;
    const double bound = RegretEnvelope(c.schedule, params, scale_total);
    run.prefix_regret.push_back(regret);
    run.prefix_bound.push_back(bound);
    run.worst_excess = std::max(run.worst_excess, regret - bound);
  }
  return run;
}

}  // namespace fullswap
