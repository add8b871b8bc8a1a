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

#include <fstream>
#include <string>

#include "fullswap/geometry.h"

namespace fullswap {

nlohmann::json ToJson(const Discretization& disc) {
  nlohmann::json points = nlohmann::json::array();
  for (const Vec& p : disc.points()) {
    nlohmann::json row = nlohmann::json::array();
    for (int i = 0; i < p.size(); ++i) row.push_back(p[i]);
    points.push_back(row);
  }
  nlohmann::json j = {{"kind", ToString(disc.kind())},
                      {"epsilon", disc.epsilon()},
                      {"dimension", disc.dimension()},
                      {"budget", disc.budget()},
                      {"points", points},
                      {"simplices", disc.simplices()}};
  if (!disc.warnings().empty()) j["warnings"] = disc.warnings();
  return j;
}

Discretization DiscretizationFromJson(const nlohmann::json& j) {
  try {
    std::vector<Vec> points;
    for (const auto& row : j.at("points")) {
      Vec p(row.size());
      for (size_t i = 0; i < row.size(); ++i) p[i] = row[i].get<double>();
      points.push_back(p);
    }
    std::vector<std::vector<int>> simplices;
    if (j.contains("simplices")) {
      simplices = j.at("simplices").get<std::vector<std::vector<int>>>();
    }
    Discretization disc(DiscretizationKindFromString(j.at("kind")),
                        j.at("epsilon").get<double>(), std::move(points),
                        std::move(simplices), j.value("budget", std::size_t{0}));
    if (j.contains("warnings")) {
      for (const auto& w : j.at("warnings")) disc.AddWarning(w.get<std::string>());
    }
    return disc;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInputError(std::string("malformed discretization: ") + e.what());
  }
}

void SaveDiscretization(const Discretization& disc, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidInputError("cannot write " + path);
  out << ToJson(disc).dump();
}

Discretization LoadDiscretization(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInputError("cannot read " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInputError(std::string("malformed JSON: ") + e.what());
  }
  return DiscretizationFromJson(j);
}

}  // namespace fullswap
