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

#ifndef FULLSWAP_COMMON_H_
#define FULLSWAP_COMMON_H_

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace fullswap {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Default absolute tolerance for membership and reconstruction checks.
inline constexpr double kTolerance = 1e-9;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInputError : public Error {
 public:
  using Error::Error;
};

class UnsupportedBodyError : public Error {
 public:
  using Error::Error;
};

class UnsupportedError : public Error {
 public:
  using Error::Error;
};

class GeometryError : public Error {
 public:
  using Error::Error;
};

class ConfigurationError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

// Raised when a point is not in the convex hull of a vertex set. The
// certificate z satisfies <z, v_i - x> >= |z|^2 > 0 for every vertex v_i.
class InfeasibleError : public Error {
 public:
  InfeasibleError(const std::string& what, Vec certificate)
      : Error(what), certificate_(std::move(certificate)) {}
  const Vec& certificate() const { return certificate_; }

 private:
  Vec certificate_;
};

// Seeds a component-specific stream so that adding a random consumer to one
// component does not shift the draws seen by another.
inline std::mt19937_64 MakeRng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

inline void CheckFinite(const Vec& x, const char* what) {
  if (!x.allFinite()) throw InvalidInputError(std::string(what) + " is not finite");
}

}  // namespace fullswap

#endif  // FULLSWAP_COMMON_H_
