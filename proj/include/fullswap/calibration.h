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

#ifndef FULLSWAP_CALIBRATION_H_
#define FULLSWAP_CALIBRATION_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fullswap/common.h"
#include "fullswap/swap_engine.h"

namespace fullswap {

// A forecast distribution over finitely many probabilities in [0, 1].
struct Forecast {
  std::vector<double> values;
  std::vector<double> probs;

  double Mean() const;
  void Validate(double tol = 1e-9) const;
};

struct CalibrationTranscript {
  std::vector<Forecast> forecasts;
  std::vector<int> outcomes;
  // When set, every forecast value must be a multiple of this lattice step.
  std::optional<double> epsilon;

  int rounds() const { return static_cast<int>(outcomes.size()); }
  void Add(Forecast f, int b);
  // Throws InvalidInputError on a malformed transcript.
  void Validate() const;
  void WriteCsv(const std::string& path) const;
};

// Per-forecast-value aggregates: mass and outcome-weighted mass.
struct CalibrationBucket {
  double value = 0.0;
  double mass = 0.0;
  double outcome_mass = 0.0;
  double Frequency() const { return outcome_mass / mass; }
};
std::vector<CalibrationBucket> Buckets(const CalibrationTranscript& tr);

// Sum over forecast values p of mass(p) * (p - empirical frequency at p)^2.
double L2CalibrationError(const CalibrationTranscript& tr);
// Same with the frequency rounded to the nearest multiple of eps (ties to
// the even multiple). Forecast values must lie on the eps-lattice.
double DiscretizedCalibrationError(const CalibrationTranscript& tr, double eps);
// Swap regret against lattice-valued deviations: the sum of
// mass(p) * ((p - f)^2 - ([f]_eps - f)^2). Per bucket it differs from the
// discretized calibration error by 2 mass(p) (p - [f]) ([f] - f).
double DiscretizedSwapRegret(const CalibrationTranscript& tr, double eps);
// Nearest multiple of eps, ties to even.
double RoundToLattice(double b, double eps);

// Embeddings that turn calibration into a structured game:
// <v(x), w(b)> = -(x - b)^2.
Vec CalibrationLearnerEmbedding(double x);
Vec CalibrationAdversaryEmbedding(double b);

class Forecaster {
 public:
  virtual ~Forecaster() = default;
  virtual Forecast NextForecast() = 0;
  virtual void Observe(int b) = 0;
  virtual std::string name() const = 0;
  // Lattice step of the emitted forecasts.
  virtual double grid_step() const = 0;
  // The engine whose plays are emitted unchanged, if there is one.
  virtual SwapEngine* mutable_engine() { return nullptr; }
};

// Swap-regret forecaster on {0, eps, ..., 1} with eps = T^(-1/3),
// strongly-convex descent per point and two-point interval rounding.
std::unique_ptr<Forecaster> MakeL2Forecaster(std::int64_t horizon);
// Forecaster restricted to multiples of eps (1/eps must be an integer):
// descent on piecewise-linearized losses with interval rounding.
std::unique_ptr<Forecaster> MakeDiscretizedForecaster(std::int64_t horizon,
                                                      double eps);
// Baseline: the T^(-1/3) forecaster with each forecast value moved to the
// nearest multiple of eps.
std::unique_ptr<Forecaster> MakeRoundedForecaster(std::int64_t horizon, double eps);
// Baseline: swap regret over the 1/eps + 1 lattice forecasts with
// multiplicative weights per action.
std::unique_ptr<Forecaster> MakeLatticeMwuForecaster(std::int64_t horizon,
                                                     double eps);

// Snaps eps to 1 / round(1 / eps); used where a lattice step is required.
double SnapToDivisor(double eps);

}  // namespace fullswap

#endif  // FULLSWAP_CALIBRATION_H_
