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

#include <random>
#include <string>

#include "fullswap/harness.h"

namespace fullswap {
namespace {

struct ParsedSpec {
  std::string name;
  std::optional<std::string> argument;
};

ParsedSpec Parse(const std::string& spec) {
  const auto open = spec.find('(');
  if (open == std::string::npos) return {spec, std::nullopt};
  if (spec.back() != ')') throw ConfigurationError("malformed adversary spec: " + spec);
  return {spec.substr(0, open), spec.substr(open + 1, spec.size() - open - 2)};
}

double ParseProbability(const std::string& text) {
  std::size_t used = 0;
  double p = 0.0;
  try {
    p = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ConfigurationError("bernoulli parameter is not a number: " + text);
  }
  if (used != text.size() || !(p >= 0.0 && p <= 1.0)) {
    throw ConfigurationError("bernoulli parameter must lie in [0, 1]: " + text);
  }
  return p;
}

std::uint64_t ParseSeed(const std::optional<std::string>& text, std::uint64_t fallback) {
  if (!text || text->empty()) return fallback;
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(*text, &used);
    if (used != text->size()) throw ConfigurationError("bad seed");
    return v;
  } catch (const std::exception&) {
    throw ConfigurationError("adversary seed must be a nonnegative integer: " + *text);
  }
}

class BernoulliBits : public BitAdversary {
 public:
  BernoulliBits(double p, std::uint64_t seed) : p_(p), rng_(MakeRng(seed, 1)) {}
  int Next(const Forecast&) override {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < p_ ? 1 : 0;
  }

 private:
  double p_;
  std::mt19937_64 rng_;
};

class PeriodicBits : public BitAdversary {
 public:
  explicit PeriodicBits(std::string pattern) : pattern_(std::move(pattern)) {}
  int Next(const Forecast&) override {
    const int b = pattern_[position_] == '1';
    position_ = (position_ + 1) % pattern_.size();
    return b;
  }

 private:
  std::string pattern_;
  std::size_t position_ = 0;
};

// Pushes the outcome away from the announced mean. Also the best response
// to squared error, so it serves both adaptive specs that reduce to it.
class OppositeBits : public BitAdversary {
 public:
  int Next(const Forecast& f) override { return f.Mean() < 0.5 ? 1 : 0; }
};

// Outcome 1 iff the empirical frequency so far is below the current mean
// forecast; an empty history counts as frequency 1/2.
class MeanRevertBits : public BitAdversary {
 public:
  int Next(const Forecast& f) override {
    const double freq = rounds_ == 0 ? 0.5 : static_cast<double>(ones_) / rounds_;
    const int b = freq < f.Mean() ? 1 : 0;
    ones_ += b;
    ++rounds_;
    return b;
  }

 private:
  std::int64_t ones_ = 0;
  std::int64_t rounds_ = 0;
};

// A hidden bias drawn once from the seed; bits are i.i.d. with that bias.
class RandomBiasBits : public BitAdversary {
 public:
  explicit RandomBiasBits(std::uint64_t seed) : rng_(MakeRng(seed, 2)) {
    bias_ = std::uniform_real_distribution<double>(0.0, 1.0)(rng_);
  }
  int Next(const Forecast&) override {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < bias_ ? 1 : 0;
  }

 private:
  std::mt19937_64 rng_;
  double bias_ = 0.5;
};

class RandomMixedAdversary : public GameAdversary {
 public:
  explicit RandomMixedAdversary(std::uint64_t seed) : rng_(MakeRng(seed, 3)) {}
  Vec Next(const Vec&, const StructuredGame& game) override {
    // Normalized exponentials are uniform on the simplex.
    std::exponential_distribution<double> exp(1.0);
    Vec q(game.adversary_actions());
    for (int j = 0; j < q.size(); ++j) q[j] = exp(rng_);
    return q / q.sum();
  }

 private:
  std::mt19937_64 rng_;
};

class BestResponseAdversary : public GameAdversary {
 public:
  Vec Next(const Vec& p, const StructuredGame& game) override {
    const Vec x = Embed(p, game.v);
    int best = 0;
    double best_value = x.dot(game.w[0]);
    for (int j = 1; j < game.adversary_actions(); ++j) {
      const double value = x.dot(game.w[j]);
      if (value < best_value) {
        best_value = value;
        best = j;
      }
    }
    return Vec::Unit(game.adversary_actions(), best);
  }
};

}  // namespace

std::unique_ptr<BitAdversary> MakeBitAdversary(const std::string& spec,
                                               std::uint64_t seed) {
  const ParsedSpec p = Parse(spec);
  if (p.name == "bernoulli") {
    if (!p.argument) throw ConfigurationError("bernoulli needs a parameter");
    return std::make_unique<BernoulliBits>(ParseProbability(*p.argument), seed);
  }
  if (p.name == "periodic") {
    if (!p.argument || p.argument->empty() ||
        p.argument->find_first_not_of("01") != std::string::npos) {
      throw ConfigurationError("periodic needs a nonempty pattern of 0 and 1");
    }
    return std::make_unique<PeriodicBits>(*p.argument);
  }
  if (p.argument && p.name != "linear-random") {
    throw ConfigurationError("adversary takes no parameter: " + spec);
  }
  if (p.name == "adaptive-opposite" || p.name == "zero-sum-best-response") {
    return std::make_unique<OppositeBits>();
  }
  if (p.name == "adaptive-mean-revert") return std::make_unique<MeanRevertBits>();
  if (p.name == "linear-random") {
    return std::make_unique<RandomBiasBits>(ParseSeed(p.argument, seed));
  }
  throw ConfigurationError("unknown adversary: " + spec);
}

std::unique_ptr<GameAdversary> MakeGameAdversary(const std::string& spec,
                                                 std::uint64_t seed) {
  const ParsedSpec p = Parse(spec);
  if (p.name == "linear-random") {
    return std::make_unique<RandomMixedAdversary>(ParseSeed(p.argument, seed));
  }
  if (p.name == "zero-sum-best-response" && !p.argument) {
    return std::make_unique<BestResponseAdversary>();
  }
  throw ConfigurationError("unknown game adversary: " + spec);
}

}  // namespace fullswap
