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

#include <cmath>

#include "fullswap/swap_engine.h"

namespace fullswap {

TableConfiguration ConfigureFromTable(LossClass cls, int d, std::int64_t horizon,
                                      double lipschitz, double alpha) {
  if (d < 1) throw ConfigurationError("dimension must be at least 1");
  if (horizon < 1) throw ConfigurationError("horizon must be at least 1");
  const double t = static_cast<double>(horizon);
  const double dd = static_cast<double>(d);
  TableConfiguration c;
  switch (cls) {
    case LossClass::kGeneral:
      c.row = "general";
      c.discretization = DiscretizationKind::kNet;
      c.epsilon = std::pow(t, -1.0 / (dd + 2));
      c.exponent = (dd + 1) / (dd + 2);
      c.variant = EngineVariant::kBmns;
      c.subroutine = SubroutineKind::kMwu;
      c.rounding = RoundingRule::kProjection;
      break;
    case LossClass::kSmooth:
      c.row = "smooth";
      c.discretization = DiscretizationKind::kTriangulation;
      c.epsilon = std::pow(t, -1.0 / (dd + 4));
      c.exponent = (dd + 2) / (dd + 4);
      c.variant = EngineVariant::kBmns;
      c.subroutine = SubroutineKind::kMwu;
      c.rounding = RoundingRule::kBarycentric;
      break;
    case LossClass::kConcave:
    case LossClass::kLinear:
      c.row = "concave-or-linear";
      c.discretization = DiscretizationKind::kBoundaryPolytope;
      c.epsilon = std::pow(t, -1.0 / (dd + 3));
      c.exponent = (dd + 1) / (dd + 3);
      c.variant = EngineVariant::kBmns;
      c.subroutine = SubroutineKind::kMwu;
      c.rounding = RoundingRule::kProjection;
      break;
    case LossClass::kStronglyConvex:
      if (!(alpha > 0) || !(lipschitz > 0)) {
        throw ConfigurationError("strongly convex row needs L > 0 and alpha > 0");
      }
      c.row = "strongly-convex";
      c.discretization = DiscretizationKind::kNet;
      c.epsilon = std::pow(lipschitz / alpha, 1.0 / (dd + 1)) *
                  std::pow(t, -1.0 / (dd + 1));
      c.exponent = dd / (dd + 1);
      c.variant = EngineVariant::kBmcs;
      c.subroutine = SubroutineKind::kGds;
      c.rounding = RoundingRule::kProjection;
      break;
    case LossClass::kScSmooth:
      c.row = "sc-smooth";
      c.discretization = DiscretizationKind::kTriangulation;
      c.epsilon = std::pow(t, -1.0 / (dd + 2));
      c.exponent = dd / (dd + 2);
      c.variant = EngineVariant::kBmcs;
      c.subroutine = SubroutineKind::kGds;
      c.rounding = RoundingRule::kBarycentric;
      break;
    default:
      throw ConfigurationError("no rate-table row for loss class " + ToString(cls));
  }
  return c;
}

Discretization BuildDiscretization(const ConvexBody& body,
                                   const TableConfiguration& table) {
  switch (table.discretization) {
    case DiscretizationKind::kNet:
      return BuildNet(body, table.epsilon);
    case DiscretizationKind::kTriangulation:
      return BuildTriangulation(body, table.epsilon);
    case DiscretizationKind::kBoundaryPolytope:
      return BuildBoundaryPolytope(body, table.epsilon);
  }
  throw ConfigurationError("unknown discretization kind");
}

EngineConfig MakeEngineConfig(const TableConfiguration& table, double lipschitz,
                              double alpha, double beta, double loss_range) {
  EngineConfig e;
  e.variant = table.variant;
  e.subroutine = table.subroutine;
  e.rounding = table.rounding;
  e.lipschitz = lipschitz;
  e.alpha = alpha;
  e.beta = beta;
  e.mwu_rate = MwuRate::kAdaptive;
  e.mwu_parameter = loss_range > 0 ? loss_range : 1.0;
  return e;
}

}  // namespace fullswap
