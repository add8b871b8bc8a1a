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

#ifndef FULLSWAP_GEOMETRY_H_
#define FULLSWAP_GEOMETRY_H_

#include <cstddef>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "fullswap/common.h"
#include "json.hpp"

namespace fullswap {

enum class BodyFamily { kBox, kBall, kPolytope };

// A compact convex set with a cheap Euclidean projection. Instances are
// immutable and safe to share between threads.
class ConvexBody {
 public:
  virtual ~ConvexBody() = default;

  virtual BodyFamily family() const = 0;
  virtual int dimension() const = 0;
  virtual bool Contains(const Vec& x, double tol = kTolerance) const = 0;
  virtual Vec Project(const Vec& x) const = 0;
  // An upper bound on the diameter; exact for boxes and balls.
  virtual double DiameterBound() const = 0;
  // Largest distance from c to a point of the body.
  virtual double MaxDistanceFrom(const Vec& c) const = 0;
  // A minimizer of <c, x> over the body. Ties resolve deterministically.
  virtual Vec MinimizeLinear(const Vec& c) const = 0;
  virtual std::pair<Vec, Vec> BoundingBox() const = 0;
  virtual nlohmann::json ToJson() const = 0;

  double Distance(const Vec& x) const { return (Project(x) - x).norm(); }
};

class Box : public ConvexBody {
 public:
  Box(Vec lo, Vec hi);

  BodyFamily family() const override { return BodyFamily::kBox; }
  int dimension() const override { return static_cast<int>(lo_.size()); }
  bool Contains(const Vec& x, double tol = kTolerance) const override;
  Vec Project(const Vec& x) const override;
  double DiameterBound() const override { return (hi_ - lo_).norm(); }
  double MaxDistanceFrom(const Vec& c) const override;
  Vec MinimizeLinear(const Vec& c) const override;
  std::pair<Vec, Vec> BoundingBox() const override { return {lo_, hi_}; }
  nlohmann::json ToJson() const override;

  const Vec& lo() const { return lo_; }
  const Vec& hi() const { return hi_; }
  std::vector<Vec> Corners() const;

 private:
  Vec lo_;
  Vec hi_;
};

class Ball : public ConvexBody {
 public:
  Ball(Vec center, double radius);

  BodyFamily family() const override { return BodyFamily::kBall; }
  int dimension() const override { return static_cast<int>(center_.size()); }
  bool Contains(const Vec& x, double tol = kTolerance) const override;
  Vec Project(const Vec& x) const override;
  double DiameterBound() const override { return 2 * radius_; }
  double MaxDistanceFrom(const Vec& c) const override;
  Vec MinimizeLinear(const Vec& c) const override;
  std::pair<Vec, Vec> BoundingBox() const override;
  nlohmann::json ToJson() const override;

  const Vec& center() const { return center_; }
  double radius() const { return radius_; }

 private:
  Vec center_;
  double radius_;
};

// The convex hull of a finite vertex list. Projection runs Wolfe's
// minimum-norm-point method, so it is exact up to round-off.
class Polytope : public ConvexBody {
 public:
  explicit Polytope(std::vector<Vec> vertices);

  BodyFamily family() const override { return BodyFamily::kPolytope; }
  int dimension() const override { return dimension_; }
  bool Contains(const Vec& x, double tol = kTolerance) const override;
  Vec Project(const Vec& x) const override;
  double DiameterBound() const override { return diameter_; }
  double MaxDistanceFrom(const Vec& c) const override;
  Vec MinimizeLinear(const Vec& c) const override;
  std::pair<Vec, Vec> BoundingBox() const override;
  nlohmann::json ToJson() const override;

  const std::vector<Vec>& vertices() const { return vertices_; }
  // Indices of vertices not in the hull of the remaining ones.
  std::vector<int> ExtremeVertexIndices() const;

 private:
  std::vector<Vec> vertices_;
  int dimension_;
  double diameter_;
};

std::shared_ptr<const ConvexBody> MakeInterval(double lo, double hi);
std::shared_ptr<const ConvexBody> MakeBox(Vec lo, Vec hi);
std::shared_ptr<const ConvexBody> MakeUnitCube(int d);
std::shared_ptr<const ConvexBody> MakeBall(Vec center, double radius);
std::shared_ptr<const ConvexBody> MakeUnitBall(int d);
std::shared_ptr<const ConvexBody> MakePolytope(std::vector<Vec> vertices);
std::shared_ptr<const ConvexBody> BodyFromJson(const nlohmann::json& j);

// Result of a minimum-norm-point query over conv(points).
struct MinNormPointResult {
  Vec point;
  std::vector<int> support;     // indices into the input, increasing
  std::vector<double> weights;  // convex weights aligned with support
  int iterations = 0;
};

// Wolfe's method. Ties between candidate points go to the lowest index so
// the output is a deterministic function of the input order.
MinNormPointResult MinNormPoint(const std::vector<Vec>& points,
                                double tol = 1e-13);

// Euclidean projection of x onto conv(points), with the convex weights
// that realize it.
MinNormPointResult ProjectOntoHull(const Vec& x, const std::vector<Vec>& points,
                                   double tol = 1e-13);

// Barycentric coordinates of x in the simplex with the given d+1 vertices.
// Solves the (d+1)x(d+1) affine system; if it is singular, falls back to a
// least-squares solution clipped to the simplex and renormalized.
std::vector<double> BarycentricWeights(const Vec& x,
                                       const std::vector<Vec>& vertices);

enum class DiscretizationKind { kNet, kTriangulation, kBoundaryPolytope };

std::string ToString(DiscretizationKind kind);
DiscretizationKind DiscretizationKindFromString(const std::string& s);

// Answer of a point-location query against a triangulation.
struct SimplexHit {
  int simplex = -1;
  Vec nearest;  // projection of the query onto the triangulated region
  double distance = 0;
  std::vector<int> vertices;  // point indices with positive weight
  std::vector<double> weights;
};

// A finite point set K^eps inside K, with optional simplices. Immutable once
// built; the spatial indices are constructed eagerly.
class Discretization {
 public:
  Discretization(DiscretizationKind kind, double epsilon,
                 std::vector<Vec> points,
                 std::vector<std::vector<int>> simplices = {},
                 std::size_t budget = 0);
  ~Discretization();
  Discretization(Discretization&&) noexcept;
  Discretization& operator=(Discretization&&) noexcept;

  DiscretizationKind kind() const { return kind_; }
  double epsilon() const { return epsilon_; }
  int dimension() const { return dimension_; }
  int size() const { return static_cast<int>(points_.size()); }
  const Vec& point(int i) const { return points_[i]; }
  const std::vector<Vec>& points() const { return points_; }
  const std::vector<std::vector<int>>& simplices() const { return simplices_; }
  bool has_simplices() const { return !simplices_.empty(); }
  // Point-count budget promised at construction, or 0 if none was declared.
  std::size_t budget() const { return budget_; }
  const std::vector<std::string>& warnings() const { return warnings_; }
  void AddWarning(std::string w) { warnings_.push_back(std::move(w)); }

  Vec CenterOfMass() const;
  // Index of the closest point; lowest index on ties.
  int NearestPoint(const Vec& x) const;
  // Simplex whose nearest point to x is closest (lowest index on ties).
  // Throws GeometryError when x is farther than eps^2 + tol from every
  // simplex, or when there are no simplices.
  SimplexHit LocateSimplex(const Vec& x, double tol = kTolerance) const;
  // Same search without the distance guard.
  SimplexHit NearestSimplex(const Vec& x) const;

  // True for 1D triangulations whose simplices join consecutive sorted points.
  bool is_sorted_chain() const { return sorted_chain_; }

 private:
  class BucketIndex;

  DiscretizationKind kind_;
  double epsilon_;
  int dimension_;
  std::vector<Vec> points_;
  std::vector<std::vector<int>> simplices_;
  std::size_t budget_;
  std::vector<std::string> warnings_;
  bool sorted_chain_ = false;
  std::unique_ptr<BucketIndex> point_index_;
  std::unique_ptr<BucketIndex> simplex_index_;
};

// {lo, lo + h, ..., hi} with n = ceil((hi - lo) / eps) segments, as a 1D
// triangulation whose simplices join neighbours.
Discretization BuildIntervalGrid(double lo, double hi, double eps);

// Grid of spacing at most eps / sqrt(d) over the bounding box, keeping grid
// points within eps / 2 of K and projecting them into K. Covering radius is
// at most eps / 2.
Discretization BuildNet(const ConvexBody& body, double eps);

// Kuhn (Freudenthal) triangulation with cell side at most eps / sqrt(d), so
// every simplex has diameter at most eps. Boxes and balls with d <= 3.
Discretization BuildTriangulation(const ConvexBody& body, double eps);

// Vertex set of a polytope inside K whose hull is within eps^2 of K.
Discretization BuildBoundaryPolytope(const ConvexBody& body, double eps);

nlohmann::json ToJson(const Discretization& disc);
Discretization DiscretizationFromJson(const nlohmann::json& j);
void SaveDiscretization(const Discretization& disc, const std::string& path);
Discretization LoadDiscretization(const std::string& path);

}  // namespace fullswap

#endif  // FULLSWAP_GEOMETRY_H_
