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
#include <string>

#include "fullswap/geometry.h"

namespace fullswap {
namespace {

Vec JsonToVec(const nlohmann::json& j) {
  if (!j.is_array()) throw InvalidInputError("expected a numeric array");
  Vec v(j.size());
  for (size_t i = 0; i < j.size(); ++i) v[i] = j[i].get<double>();
  return v;
}

nlohmann::json VecToJson(const Vec& v) {
  nlohmann::json j = nlohmann::json::array();
  for (int i = 0; i < v.size(); ++i) j.push_back(v[i]);
  return j;
}

}  // namespace

Box::Box(Vec lo, Vec hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (lo_.size() == 0 || lo_.size() != hi_.size()) {
    throw InvalidInputError("Box: bad bounds");
  }
  CheckFinite(lo_, "Box lower bound");
  CheckFinite(hi_, "Box upper bound");
  for (int i = 0; i < lo_.size(); ++i) {
    if (!(lo_[i] <= hi_[i])) throw InvalidInputError("Box: lo > hi");
  }
}

bool Box::Contains(const Vec& x, double tol) const {
  if (x.size() != lo_.size()) return false;
  for (int i = 0; i < x.size(); ++i) {
    if (x[i] < lo_[i] - tol || x[i] > hi_[i] + tol) return false;
  }
  return true;
}

Vec Box::Project(const Vec& x) const {
  if (x.size() != lo_.size()) throw InvalidInputError("Box: dimension mismatch");
  return x.cwiseMax(lo_).cwiseMin(hi_);
}

double Box::MaxDistanceFrom(const Vec& c) const {
  double sq = 0.0;
  for (int i = 0; i < c.size(); ++i) {
    const double a = std::max(std::abs(c[i] - lo_[i]), std::abs(c[i] - hi_[i]));
    sq += a * a;
  }
  return std::sqrt(sq);
}

Vec Box::MinimizeLinear(const Vec& c) const {
  Vec x(lo_.size());
  // Zero coefficients pick the lower bound.
  for (int i = 0; i < c.size(); ++i) x[i] = c[i] < 0 ? hi_[i] : lo_[i];
  return x;
}

std::vector<Vec> Box::Corners() const {
  const int d = dimension();
  std::vector<Vec> out;
  for (int mask = 0; mask < (1 << d); ++mask) {
    Vec v(d);
    for (int i = 0; i < d; ++i) v[i] = (mask >> i) & 1 ? hi_[i] : lo_[i];
    out.push_back(v);
  }
  return out;
}

nlohmann::json Box::ToJson() const {
  return {{"type", "box"}, {"lo", VecToJson(lo_)}, {"hi", VecToJson(hi_)}};
}

Ball::Ball(Vec center, double radius)
    : center_(std::move(center)), radius_(radius) {
  if (center_.size() == 0) throw InvalidInputError("Ball: empty center");
  CheckFinite(center_, "Ball center");
  if (!(radius_ > 0) || !std::isfinite(radius_)) {
    throw InvalidInputError("Ball: radius must be positive");
  }
}

bool Ball::Contains(const Vec& x, double tol) const {
  return x.size() == center_.size() && (x - center_).norm() <= radius_ + tol;
}

Vec Ball::Project(const Vec& x) const {
  if (x.size() != center_.size()) {
    throw InvalidInputError("Ball: dimension mismatch");
  }
  const Vec diff = x - center_;
  const double n = diff.norm();
  if (n <= radius_) return x;
  return center_ + (radius_ / n) * diff;
}

double Ball::MaxDistanceFrom(const Vec& c) const {
  return (c - center_).norm() + radius_;
}

Vec Ball::MinimizeLinear(const Vec& c) const {
  const double n = c.norm();
  if (n == 0.0) return center_;
  return center_ - (radius_ / n) * c;
}

std::pair<Vec, Vec> Ball::BoundingBox() const {
  const Vec r = Vec::Constant(center_.size(), radius_);
  return {center_ - r, center_ + r};
}

nlohmann::json Ball::ToJson() const {
  return {{"type", "ball"}, {"center", VecToJson(center_)}, {"radius", radius_}};
}

Polytope::Polytope(std::vector<Vec> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.empty()) throw InvalidInputError("Polytope: no vertices");
  dimension_ = static_cast<int>(vertices_[0].size());
  if (dimension_ == 0) throw InvalidInputError("Polytope: zero dimension");
  diameter_ = 0.0;
  for (const Vec& v : vertices_) {
    if (v.size() != dimension_) {
      throw InvalidInputError("Polytope: inconsistent dimensions");
    }
    CheckFinite(v, "Polytope vertex");
  }
  for (size_t i = 0; i < vertices_.size(); ++i) {
    for (size_t j = i + 1; j < vertices_.size(); ++j) {
      diameter_ = std::max(diameter_, (vertices_[i] - vertices_[j]).norm());
    }
  }
}

bool Polytope::Contains(const Vec& x, double tol) const {
  if (x.size() != dimension_) return false;
  // Hull projections carry roundoff, so a zero tolerance gets a small floor.
  return (Project(x) - x).norm() <= std::max(tol, 1e-12 * (1.0 + diameter_));
}

Vec Polytope::Project(const Vec& x) const {
  if (x.size() != dimension_) {
    throw InvalidInputError("Polytope: dimension mismatch");
  }
  return ProjectOntoHull(x, vertices_).point;
}

double Polytope::MaxDistanceFrom(const Vec& c) const {
  double best = 0.0;
  for (const Vec& v : vertices_) best = std::max(best, (v - c).norm());
  return best;
}

Vec Polytope::MinimizeLinear(const Vec& c) const {
  int best = 0;
  double value = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < vertices_.size(); ++i) {
    const double v = c.dot(vertices_[i]);
    if (v < value) {
      value = v;
      best = static_cast<int>(i);
    }
  }
  return vertices_[best];
}

std::pair<Vec, Vec> Polytope::BoundingBox() const {
  Vec lo = vertices_[0];
  Vec hi = vertices_[0];
  for (const Vec& v : vertices_) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  return {lo, hi};
}

std::vector<int> Polytope::ExtremeVertexIndices() const {
  std::vector<int> out;
  const int n = static_cast<int>(vertices_.size());
  for (int i = 0; i < n; ++i) {
    // Duplicates keep only their first copy.
    bool duplicate = false;
    for (int j = 0; j < i && !duplicate; ++j) {
      duplicate = (vertices_[j] - vertices_[i]).norm() <= 1e-12;
    }
    if (duplicate) continue;
    std::vector<Vec> others;
    for (int j = 0; j < n; ++j) {
      if (j != i && (vertices_[j] - vertices_[i]).norm() > 1e-12) {
        others.push_back(vertices_[j]);
      }
    }
    if (others.empty() ||
        (ProjectOntoHull(vertices_[i], others).point - vertices_[i]).norm() >
            1e-10) {
      out.push_back(i);
    }
  }
  return out;
}

nlohmann::json Polytope::ToJson() const {
  nlohmann::json vs = nlohmann::json::array();
  for (const Vec& v : vertices_) vs.push_back(VecToJson(v));
  return {{"type", "polytope"}, {"vertices", vs}};
}

std::shared_ptr<const ConvexBody> MakeInterval(double lo, double hi) {
  return std::make_shared<Box>(Vec::Constant(1, lo), Vec::Constant(1, hi));
}

std::shared_ptr<const ConvexBody> MakeBox(Vec lo, Vec hi) {
  return std::make_shared<Box>(std::move(lo), std::move(hi));
}

std::shared_ptr<const ConvexBody> MakeUnitCube(int d) {
  return std::make_shared<Box>(Vec::Zero(d), Vec::Ones(d));
}

std::shared_ptr<const ConvexBody> MakeBall(Vec center, double radius) {
  return std::make_shared<Ball>(std::move(center), radius);
}

std::shared_ptr<const ConvexBody> MakeUnitBall(int d) {
  return std::make_shared<Ball>(Vec::Zero(d), 1.0);
}

std::shared_ptr<const ConvexBody> MakePolytope(std::vector<Vec> vertices) {
  return std::make_shared<Polytope>(std::move(vertices));
}

std::shared_ptr<const ConvexBody> BodyFromJson(const nlohmann::json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "box") return MakeBox(JsonToVec(j.at("lo")), JsonToVec(j.at("hi")));
  if (type == "interval") {
    return MakeInterval(j.value("lo", 0.0), j.value("hi", 1.0));
  }
  if (type == "ball") {
    return MakeBall(JsonToVec(j.at("center")), j.at("radius").get<double>());
  }
  if (type == "polytope") {
    std::vector<Vec> vs;
    for (const auto& v : j.at("vertices")) vs.push_back(JsonToVec(v));
    return MakePolytope(std::move(vs));
  }
  throw UnsupportedBodyError("unknown body type: " + type);
}

}  // namespace fullswap
