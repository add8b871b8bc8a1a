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

// Command-line front end for the experiment harness.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fullswap/harness.h"
#include "json.hpp"

namespace {

struct RunFlags {
  std::int64_t horizon = 1000;
  std::optional<double> eps;
  int dimension = 1;
  std::string adversary;
  std::uint64_t seed = 0;
  std::string out;
  std::string config;
  std::string loss_class;
  std::string algorithm = "discretized";
  std::string game_file;
  int actions = 20;
  int checkpoints = 40;
};

void AddCommonFlags(CLI::App* app, RunFlags& f) {
  app->add_option("--T", f.horizon, "horizon");
  app->add_option("--eps", f.eps, "discretization scale override");
  app->add_option("--d", f.dimension, "dimension");
  app->add_option("--adversary", f.adversary, "adversary, e.g. bernoulli(0.5)");
  app->add_option("--seed", f.seed, "seed");
  app->add_option("--out", f.out, "output prefix for <out>.csv and <out>.json");
  app->add_option("--config", f.config, "JSON config; its keys override flags");
  app->add_option("--checkpoints", f.checkpoints, "number of CSV checkpoints");
}

int Run(const std::string& scenario, const RunFlags& f, const std::string& default_adversary) {
  nlohmann::json j = {{"scenario", scenario},
                      {"T", f.horizon},
                      {"d", f.dimension},
                      {"adversary", f.adversary.empty() ? default_adversary : f.adversary},
                      {"seed", f.seed},
                      {"algorithm", f.algorithm},
                      {"actions", f.actions},
                      {"checkpoints", f.checkpoints},
                      {"loss_class", f.loss_class},
                      {"game_file", f.game_file},
                      {"out", f.out}};
  if (f.eps) j["eps"] = *f.eps;
  if (!f.config.empty()) {
    std::ifstream in(f.config);
    if (!in) throw fullswap::ConfigurationError("cannot read config " + f.config);
    nlohmann::json file;
    try {
      file = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw fullswap::ConfigurationError(std::string("config: ") + e.what());
    }
    if (!file.is_object()) throw fullswap::ConfigurationError("config must be an object");
    j.update(file);
  }
  const fullswap::RegretReport report =
      fullswap::RunExperiment(fullswap::ExperimentConfig::FromJson(j));
  std::cout << report.ToJson().dump(2) << '\n';
  return 0;
}

int Report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw fullswap::InvalidInputError("cannot read " + path);
  const nlohmann::json j = nlohmann::json::parse(in);
  std::cout << "scenario " << j.at("config").at("scenario").get<std::string>()
            << "  T=" << j.at("config").at("T") << "  hash " << j.value("input_hash", "")
            << '\n';
  for (const auto& [k, v] : j.at("metrics").items()) {
    std::cout << "  " << k << " = " << v.dump() << '\n';
  }
  bool ok = true;
  for (const auto& [k, v] : j.at("flags").items()) {
    std::cout << "  [" << (v.get<bool>() ? "ok" : "FAIL") << "] " << k << '\n';
    ok = ok && v.get<bool>();
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"full swap regret experiments"};
  app.require_subcommand(1);
  RunFlags f;

  auto* calibrate = app.add_subcommand("calibrate", "l2 calibration forecaster");
  AddCommonFlags(calibrate, f);

  auto* disc = app.add_subcommand("disc-calibrate", "discretized calibration");
  AddCommonFlags(disc, f);
  disc->add_option("--algorithm", f.algorithm, "discretized | rounded | lattice-mwu");

  auto* game = app.add_subcommand("game", "structured game play");
  AddCommonFlags(game, f);
  game->add_option("--game", f.game_file, "game JSON file");
  game->add_option("--actions", f.actions, "actions per side for a random game");
  game->add_option("--loss-class", f.loss_class, "table row for the learner");

  auto* oco = app.add_subcommand("oco-check", "scaled OCO regret envelope");
  AddCommonFlags(oco, f);
  oco->add_option("--loss-class", f.loss_class, "sc-smooth | nsc | convex");

  auto* decomposition = app.add_subcommand("decompose", "swap regret decomposition");
  AddCommonFlags(decomposition, f);
  decomposition->add_option("--loss-class", f.loss_class, "table row");

  std::vector<std::int64_t> sweep_horizons = {1000, 10000};
  std::vector<double> sweep_exponents = {3, 4, 5};
  std::string sweep_adversary = "bernoulli(0.5)";
  std::uint64_t sweep_seed = 0;
  std::string sweep_out;
  auto* sweep = app.add_subcommand("sweep", "discretized calibration comparison CSV");
  sweep->add_option("--T", sweep_horizons, "horizons");
  sweep->add_option("--inv-exponents", sweep_exponents, "eps = T^(-1/a) for each a");
  sweep->add_option("--adversary", sweep_adversary, "adversary, e.g. bernoulli(0.5)");
  sweep->add_option("--seed", sweep_seed, "seed");
  sweep->add_option("--out", sweep_out, "CSV path")->required();

  std::string report_in;
  auto* report = app.add_subcommand("report", "summarize a JSON report");
  report->add_option("--in", report_in, "report JSON")->required();

  CLI11_PARSE(app, argc, argv);
  try {
    if (*calibrate) return Run("calibration", f, "bernoulli(0.5)");
    if (*disc) return Run("discretized-calibration", f, "bernoulli(0.5)");
    if (*game) return Run("structured-game", f, "self-play");
    if (*oco) return Run("oco-envelope", f, "none");
    if (*decomposition) return Run("swap-decomposition", f, "linear-random");
    if (*sweep) {
      const auto rows = fullswap::RunDiscretizedSweep(sweep_horizons, sweep_exponents,
                                                      sweep_adversary, sweep_seed);
      fullswap::WriteSweepCsv(rows, sweep_out);
      std::cout << "wrote " << rows.size() << " rows to " << sweep_out << '\n';
      return 0;
    }
    if (*report) return Report(report_in);
  } catch (const fullswap::ConfigurationError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
