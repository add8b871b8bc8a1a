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
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "fullswap/geometry.h"

namespace fullswap {

// Uniform buckets of side h over R^d. An item is registered in every bucket
// its bounding box touches. Queries scan Chebyshev rings of buckets outward
// and stop once the best distance found is provably optimal, so answers are
// exact regardless of the bucket size.
class Discretization::BucketIndex {
 public:
  BucketIndex(const Vec& lo, const Vec& hi, double h)
      : origin_(lo), h_(h), lo_cell_(lo.size()), hi_cell_(lo.size()) {
    for (int a = 0; a < lo.size(); ++a) {
      lo_cell_[a] = 0;
      hi_cell_[a] = Cell(hi[a], a);
    }
  }

  void Insert(int item, const Vec& lo, const Vec& hi) {
    const int d = static_cast<int>(origin_.size());
    std::vector<std::int64_t> a(d), b(d), c(d);
    for (int i = 0; i < d; ++i) {
      a[i] = std::clamp(Cell(lo[i], i), lo_cell_[i], hi_cell_[i]);
      b[i] = std::clamp(Cell(hi[i], i), lo_cell_[i], hi_cell_[i]);
      c[i] = a[i];
    }
    while (true) {
      buckets_[Key(c)].push_back(item);
      int i = 0;
      for (; i < d; ++i) {
        if (++c[i] <= b[i]) break;
        c[i] = a[i];
      }
      if (i == d) break;
    }
  }

  // Returns the item minimizing dist(item) with ties to the lowest index.
  template <typename DistFn>
  std::pair<int, double> Nearest(const Vec& x, DistFn dist) const {
    const int d = static_cast<int>(origin_.size());
    std::vector<std::int64_t> center(d);
    std::int64_t start = 0;
    std::int64_t reach = 0;
    for (int i = 0; i < d; ++i) {
      center[i] = Cell(x[i], i);
      std::int64_t gap = 0;
      if (center[i] < lo_cell_[i]) gap = lo_cell_[i] - center[i];
      if (center[i] > hi_cell_[i]) gap = center[i] - hi_cell_[i];
      start = std::max(start, gap);
      reach = std::max({reach, std::abs(center[i] - lo_cell_[i]),
                        std::abs(center[i] - hi_cell_[i])});
    }
    int best = -1;
    double best_dist = std::numeric_limits<double>::infinity();
    std::vector<std::int64_t> a(d), b(d), c(d);
    for (std::int64_t r = start; r <= reach; ++r) {
      for (int i = 0; i < d; ++i) {
        a[i] = std::max(center[i] - r, lo_cell_[i]);
        b[i] = std::min(center[i] + r, hi_cell_[i]);
        c[i] = a[i];
      }
      bool empty = false;
      for (int i = 0; i < d; ++i) empty = empty || a[i] > b[i];
      while (!empty) {
        std::int64_t cheb = 0;
        for (int i = 0; i < d; ++i) {
          cheb = std::max(cheb, std::abs(c[i] - center[i]));
        }
        if (cheb == r) {
          auto it = buckets_.find(Key(c));
          if (it != buckets_.end()) {
            for (int item : it->second) {
              const double v = dist(item);
              if (v < best_dist || (v == best_dist && item < best)) {
                best_dist = v;
                best = item;
              }
            }
          }
        }
        int i = 0;
        for (; i < d; ++i) {
          if (++c[i] <= b[i]) break;
          c[i] = a[i];
        }
        if (i == d) break;
      }
      if (best >= 0 && best_dist <= static_cast<double>(r) * h_) break;
    }
    return {best, best_dist};
  }

 private:
  std::int64_t Cell(double v, int axis) const {
    const double c = std::floor((v - origin_[axis]) / h_);
    return static_cast<std::int64_t>(std::clamp(c, -1e15, 1e15));
  }

  // Collisions only add spurious candidates, which the exact distance
  // comparison discards.
  static std::uint64_t Key(const std::vector<std::int64_t>& c) {
    std::uint64_t h = 1469598103934665603ull;
    for (std::int64_t v : c) {
      h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ull + (h << 6) +
           (h >> 2);
    }
    return h;
  }

  Vec origin_;
  double h_;
  std::vector<std::int64_t> lo_cell_;
  std::vector<std::int64_t> hi_cell_;
  std::unordered_map<std::uint64_t, std::vector<int>> buckets_;
};

std::string ToString(DiscretizationKind kind) {
  switch (kind) {
    case DiscretizationKind::kNet:
      return "net";
    case DiscretizationKind::kTriangulation:
      return "triangulation";
    case DiscretizationKind::kBoundaryPolytope:
      return "boundary-polytope";
  }
  return "unknown";
}

DiscretizationKind DiscretizationKindFromString(const std::string& s) {
  if (s == "net") return DiscretizationKind::kNet;
  if (s == "triangulation") return DiscretizationKind::kTriangulation;
  if (s == "boundary-polytope") return DiscretizationKind::kBoundaryPolytope;
  throw InvalidInputError("unknown discretization kind: " + s);
}

Discretization::Discretization(DiscretizationKind kind, double epsilon,
                               std::vector<Vec> points,
                               std::vector<std::vector<int>> simplices,
                               std::size_t budget)
    : kind_(kind),
      epsilon_(epsilon),
      points_(std::move(points)),
      simplices_(std::move(simplices)),
      budget_(budget) {
  if (!(epsilon_ > 0) || !std::isfinite(epsilon_)) {
    throw InvalidInputError("Discretization: epsilon must be positive");
  }
  if (points_.empty()) throw GeometryError("Discretization: no points");
  dimension_ = static_cast<int>(points_[0].size());
  if (dimension_ == 0) throw GeometryError("Discretization: zero dimension");
  for (const Vec& p : points_) {
    if (p.size() != dimension_) {
      throw GeometryError("Discretization: inconsistent point dimensions");
    }
    CheckFinite(p, "Discretization point");
  }
  if (budget_ > 0 && points_.size() > budget_) {
    throw GeometryError("Discretization: point count exceeds its budget");
  }
  for (const auto& s : simplices_) {
    if (s.empty() || static_cast<int>(s.size()) > dimension_ + 1) {
      throw GeometryError("Discretization: bad simplex arity");
    }
    for (size_t i = 0; i < s.size(); ++i) {
      if (s[i] < 0 || s[i] >= size()) {
        throw GeometryError("Discretization: simplex index out of range");
      }
      for (size_t j = 0; j < i; ++j) {
        if (s[i] == s[j]) {
          throw GeometryError("Discretization: repeated simplex vertex");
        }
      }
    }
  }

  if (dimension_ == 1 && !simplices_.empty() &&
      simplices_.size() + 1 == points_.size()) {
    bool chain = true;
    for (int i = 0; i + 1 < size() && chain; ++i) {
      chain = points_[i][0] < points_[i + 1][0];
    }
    for (size_t i = 0; i < simplices_.size() && chain; ++i) {
      const auto& s = simplices_[i];
      const int lo = std::min(s[0], s.size() > 1 ? s[1] : s[0]);
      const int hi = std::max(s[0], s.size() > 1 ? s[1] : s[0]);
      chain = s.size() == 2 && lo == static_cast<int>(i) && hi == lo + 1;
    }
    sorted_chain_ = chain;
  }

  Vec lo = points_[0];
  Vec hi = points_[0];
  for (const Vec& p : points_) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const double h = std::max(epsilon_, 1e-9 * std::max(1.0, (hi - lo).norm()));
  point_index_ = std::make_unique<BucketIndex>(lo, hi, h);
  for (int i = 0; i < size(); ++i) point_index_->Insert(i, points_[i], points_[i]);
  if (!simplices_.empty() && !sorted_chain_) {
    simplex_index_ = std::make_unique<BucketIndex>(lo, hi, h);
    for (int s = 0; s < static_cast<int>(simplices_.size()); ++s) {
      Vec slo = points_[simplices_[s][0]];
      Vec shi = slo;
      for (int v : simplices_[s]) {
        slo = slo.cwiseMin(points_[v]);
        shi = shi.cwiseMax(points_[v]);
      }
      simplex_index_->Insert(s, slo, shi);
    }
  }
}

Discretization::~Discretization() = default;
Discretization::Discretization(Discretization&&) noexcept = default;
Discretization& Discretization::operator=(Discretization&&) noexcept = default;

Vec Discretization::CenterOfMass() const {
  Vec m = Vec::Zero(dimension_);
  for (const Vec& p : points_) m += p;
  return m / static_cast<double>(points_.size());
}

int Discretization::NearestPoint(const Vec& x) const {
  if (x.size() != dimension_) {
    throw InvalidInputError("NearestPoint: dimension mismatch");
  }
  CheckFinite(x, "NearestPoint query");
  return point_index_
      ->Nearest(x, [&](int i) { return (points_[i] - x).squaredNorm(); })
      .first;
}

SimplexHit Discretization::NearestSimplex(const Vec& x) const {
  if (simplices_.empty()) {
    throw GeometryError("LocateSimplex: discretization has no simplices");
  }
  if (x.size() != dimension_) {
    throw InvalidInputError("LocateSimplex: dimension mismatch");
  }
  CheckFinite(x, "LocateSimplex query");
  SimplexHit hit;
  if (sorted_chain_) {
    const double lo = points_.front()[0];
    const double hi = points_.back()[0];
    const double v = std::clamp(x[0], lo, hi);
    auto it = std::upper_bound(
        points_.begin(), points_.end(), v,
        [](double value, const Vec& p) { return value < p[0]; });
    int i = static_cast<int>(it - points_.begin()) - 1;
    // A query sitting on a shared knot belongs to the lower segment.
    if (i > 0 && points_[i][0] == v) --i;
    i = std::clamp(i, 0, size() - 2);
    const double a = points_[i][0];
    const double b = points_[i + 1][0];
    const double t = std::clamp((v - a) / (b - a), 0.0, 1.0);
    hit.simplex = i;
    hit.nearest = Vec::Constant(1, v);
    hit.distance = std::abs(x[0] - v);
    if (t < 1.0) {
      hit.vertices.push_back(i);
      hit.weights.push_back(1.0 - t);
    }
    if (t > 0.0) {
      hit.vertices.push_back(i + 1);
      hit.weights.push_back(t);
    }
    return hit;
  }

  std::vector<MinNormPointResult> cache(simplices_.size());
  std::vector<char> done(simplices_.size(), 0);
  auto dist = [&](int s) {
    if (!done[s]) {
      std::vector<Vec> verts;
      for (int v : simplices_[s]) verts.push_back(points_[v]);
      cache[s] = ProjectOntoHull(x, verts);
      done[s] = 1;
    }
    return (cache[s].point - x).norm();
  };
  auto [best, best_dist] = simplex_index_->Nearest(x, dist);
  const auto& s = simplices_[best];
  const MinNormPointResult& proj = cache[best];
  std::vector<Vec> verts;
  for (int v : s) verts.push_back(points_[v]);
  std::vector<double> w;
  if (static_cast<int>(s.size()) == dimension_ + 1) {
    w = BarycentricWeights(proj.point, verts);
  } else {
    w.assign(s.size(), 0.0);
    for (size_t k = 0; k < proj.support.size(); ++k) {
      w[proj.support[k]] = proj.weights[k];
    }
  }
  hit.simplex = best;
  hit.nearest = proj.point;
  hit.distance = best_dist;
  for (size_t k = 0; k < s.size(); ++k) {
    if (w[k] > 0.0) {
      hit.vertices.push_back(s[k]);
      hit.weights.push_back(w[k]);
    }
  }
  return hit;
}

SimplexHit Discretization::LocateSimplex(const Vec& x, double tol) const {
  SimplexHit hit = NearestSimplex(x);
  if (hit.distance > epsilon_ * epsilon_ + tol) {
    throw GeometryError("LocateSimplex: query is farther than eps^2 from "
                        "the triangulation");
  }
  return hit;
}

namespace {

int SegmentCount(double length, double spacing) {
  const double raw = std::ceil(length / spacing - 1e-9);
  if (raw > 1e7) throw InvalidInputError("grid too fine");
  return std::max(1, static_cast<int>(raw));
}

void CheckEpsilon(double eps) {
  if (!(eps > 0) || !std::isfinite(eps)) {
    throw InvalidInputError("epsilon must be positive and finite");
  }
}

// Iterates multi-indices in [0, counts) with the first axis fastest.
template <typename Fn>
void ForEachIndex(const std::vector<int>& counts, Fn fn) {
  const int d = static_cast<int>(counts.size());
  std::vector<int> idx(d, 0);
  for (int c : counts) {
    if (c <= 0) return;
  }
  while (true) {
    fn(idx);
    int i = 0;
    for (; i < d; ++i) {
      if (++idx[i] < counts[i]) break;
      idx[i] = 0;
    }
    if (i == d) return;
  }
}

struct Lattice {
  Vec lo;
  Vec step;
  std::vector<int> segments;

  Vec Point(const std::vector<int>& idx) const {
    Vec p(lo.size());
    for (int a = 0; a < lo.size(); ++a) p[a] = lo[a] + idx[a] * step[a];
    return p;
  }
  std::size_t Linear(const std::vector<int>& idx) const {
    std::size_t id = 0;
    for (int a = static_cast<int>(lo.size()) - 1; a >= 0; --a) {
      id = id * (segments[a] + 1) + idx[a];
    }
    return id;
  }
  std::size_t VertexCount() const {
    std::size_t n = 1;
    for (int s : segments) n *= static_cast<std::size_t>(s + 1);
    return n;
  }
};

Lattice MakeLattice(const Vec& lo, const Vec& hi, double spacing) {
  Lattice l;
  l.lo = lo;
  l.step = Vec::Zero(lo.size());
  for (int a = 0; a < lo.size(); ++a) {
    const double len = hi[a] - lo[a];
    const int n = len > 0 ? SegmentCount(len, spacing) : 0;
    l.segments.push_back(n);
    l.step[a] = n > 0 ? len / n : 0.0;
  }
  if (l.VertexCount() > 20'000'000) throw InvalidInputError("grid too large");
  return l;
}

std::vector<int> VertexCounts(const Lattice& l) {
  std::vector<int> c;
  for (int s : l.segments) c.push_back(s + 1);
  return c;
}

// Rounds coordinates to a fine lattice so that projections of distinct grid
// points onto the same boundary point are merged.
struct PointKey {
  std::vector<long long> c;
  bool operator==(const PointKey& o) const { return c == o.c; }
};
struct PointKeyHash {
  std::size_t operator()(const PointKey& k) const {
    std::size_t h = 0;
    for (long long v : k.c) h = h * 1000003u ^ std::hash<long long>()(v);
    return h;
  }
};
PointKey KeyOf(const Vec& p) {
  PointKey k;
  for (int i = 0; i < p.size(); ++i) k.c.push_back(std::llround(p[i] * 1e11));
  return k;
}

}  // namespace

Discretization BuildIntervalGrid(double lo, double hi, double eps) {
  CheckEpsilon(eps);
  if (!std::isfinite(lo) || !std::isfinite(hi) || hi < lo) {
    throw InvalidInputError("BuildIntervalGrid: bad interval");
  }
  if (hi == lo) {
    return Discretization(DiscretizationKind::kTriangulation, eps,
                          {Vec::Constant(1, lo)}, {}, 1);
  }
  const int n = SegmentCount(hi - lo, eps);
  std::vector<Vec> points;
  std::vector<std::vector<int>> simplices;
  for (int i = 0; i <= n; ++i) {
    const double v = i == n ? hi : lo + (hi - lo) * i / n;
    points.push_back(Vec::Constant(1, v));
    if (i < n) simplices.push_back({i, i + 1});
  }
  return Discretization(DiscretizationKind::kTriangulation, eps,
                        std::move(points), std::move(simplices), n + 1);
}

Discretization BuildNet(const ConvexBody& body, double eps) {
  CheckEpsilon(eps);
  const int d = body.dimension();
  auto [lo, hi] = body.BoundingBox();
  const Lattice lat = MakeLattice(lo, hi, eps / std::sqrt(static_cast<double>(d)));
  std::vector<Vec> points;
  std::unordered_set<PointKey, PointKeyHash> seen;
  const bool is_box = body.family() == BodyFamily::kBox;
  ForEachIndex(VertexCounts(lat), [&](const std::vector<int>& idx) {
    Vec g = lat.Point(idx);
    if (is_box) {
      points.push_back(body.Project(g));
      return;
    }
    const Vec p = body.Project(g);
    if ((p - g).norm() > eps / 2) return;
    if (seen.insert(KeyOf(p)).second) points.push_back(p);
  });
  if (points.empty()) throw GeometryError("BuildNet: empty net");
  return Discretization(DiscretizationKind::kNet, eps, std::move(points), {},
                        lat.VertexCount());
}

Discretization BuildTriangulation(const ConvexBody& body, double eps) {
  CheckEpsilon(eps);
  const int d = body.dimension();
  if (d > 3) {
    throw UnsupportedBodyError("triangulation is implemented for d <= 3");
  }
  if (body.family() == BodyFamily::kPolytope) {
    throw UnsupportedBodyError("triangulation supports boxes and balls");
  }
  auto [lo, hi] = body.BoundingBox();
  if (d == 1) return BuildIntervalGrid(lo[0], hi[0], eps);
  const Lattice lat = MakeLattice(lo, hi, eps / std::sqrt(static_cast<double>(d)));
  for (int s : lat.segments) {
    if (s == 0) throw UnsupportedBodyError("triangulation of a flat box");
  }

  std::vector<int> perm(d);
  std::vector<std::vector<int>> perms;
  std::iota(perm.begin(), perm.end(), 0);
  do {
    perms.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));

  const bool is_ball = body.family() == BodyFamily::kBall;
  std::unordered_map<std::size_t, int> remap;
  std::vector<Vec> points;
  std::vector<std::vector<int>> simplices;
  auto vertex_id = [&](const std::vector<int>& idx) {
    const std::size_t key = lat.Linear(idx);
    auto it = remap.find(key);
    if (it != remap.end()) return it->second;
    Vec p = lat.Point(idx);
    if (is_ball) p = body.Project(p);
    const int id = static_cast<int>(points.size());
    points.push_back(p);
    remap.emplace(key, id);
    return id;
  };
  ForEachIndex(lat.segments, [&](const std::vector<int>& cell) {
    if (is_ball) {
      // Keep cells whose box meets the ball.
      const auto& ball = static_cast<const Ball&>(body);
      const Vec clo = lat.Point(cell);
      const Vec chi = clo + lat.step;
      const Vec closest = ball.center().cwiseMax(clo).cwiseMin(chi);
      if ((closest - ball.center()).norm() > ball.radius()) return;
    }
    for (const auto& p : perms) {
      std::vector<int> idx = cell;
      std::vector<int> simplex = {vertex_id(idx)};
      for (int k = 0; k < d; ++k) {
        ++idx[p[k]];
        simplex.push_back(vertex_id(idx));
      }
      simplices.push_back(std::move(simplex));
    }
  });
  return Discretization(DiscretizationKind::kTriangulation, eps,
                        std::move(points), std::move(simplices),
                        lat.VertexCount());
}

namespace {

std::vector<Vec> Icosphere(double tol_defect, double radius) {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec> v;
  const double raw[12][3] = {{-1, phi, 0}, {1, phi, 0},   {-1, -phi, 0},
                             {1, -phi, 0}, {0, -1, phi},  {0, 1, phi},
                             {0, -1, -phi}, {0, 1, -phi}, {phi, 0, -1},
                             {phi, 0, 1},  {-phi, 0, -1}, {-phi, 0, 1}};
  for (const auto& r : raw) v.push_back(Vec{{r[0], r[1], r[2]}}.normalized());
  std::vector<std::array<int, 3>> faces = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
      {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
      {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
      {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  auto defect = [&]() {
    double worst = 0.0;
    for (const auto& f : faces) {
      const Vec a = v[f[0]], b = v[f[1]], c = v[f[2]];
      Eigen::Vector3d n =
          Eigen::Vector3d(b - a).cross(Eigen::Vector3d(c - a)).normalized();
      worst = std::max(worst, radius * (1.0 - std::abs(n.dot(Eigen::Vector3d(a)))));
    }
    return worst;
  };
  while (defect() > tol_defect) {
    if (faces.size() > 5'000'000) throw InvalidInputError("icosphere too fine");
    std::unordered_map<std::uint64_t, int> mid;
    auto midpoint = [&](int a, int b) {
      const std::uint64_t key =
          (static_cast<std::uint64_t>(std::min(a, b)) << 32) | std::max(a, b);
      auto it = mid.find(key);
      if (it != mid.end()) return it->second;
      v.push_back((v[a] + v[b]).normalized());
      const int id = static_cast<int>(v.size()) - 1;
      mid.emplace(key, id);
      return id;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(faces.size() * 4);
    for (const auto& f : faces) {
      const int ab = midpoint(f[0], f[1]);
      const int bc = midpoint(f[1], f[2]);
      const int ca = midpoint(f[2], f[0]);
      next.push_back({f[0], ab, ca});
      next.push_back({f[1], bc, ab});
      next.push_back({f[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    faces = std::move(next);
  }
  return v;
}

}  // namespace

Discretization BuildBoundaryPolytope(const ConvexBody& body, double eps) {
  CheckEpsilon(eps);
  const int d = body.dimension();
  const double defect = eps * eps;
  std::vector<Vec> points;
  if (d == 1) {
    auto [lo, hi] = body.BoundingBox();
    points.push_back(lo);
    if (hi[0] > lo[0]) points.push_back(hi);
  } else if (body.family() == BodyFamily::kBox) {
    if (d > 20) throw UnsupportedBodyError("box corners: dimension too large");
    points = static_cast<const Box&>(body).Corners();
  } else if (body.family() == BodyFamily::kPolytope) {
    const auto& poly = static_cast<const Polytope&>(body);
    for (int i : poly.ExtremeVertexIndices()) points.push_back(poly.vertices()[i]);
  } else {
    const auto& ball = static_cast<const Ball&>(body);
    const double r = ball.radius();
    if (d == 2) {
      int m = 3;
      const double c = 1.0 - defect / r;
      if (c > -1.0) {
        m = std::max(3, static_cast<int>(std::ceil(M_PI / std::acos(c))));
      }
      while (r * (1.0 - std::cos(M_PI / m)) > defect) ++m;
      while (m > 3 && r * (1.0 - std::cos(M_PI / (m - 1))) <= defect) --m;
      for (int k = 0; k < m; ++k) {
        const double th = 2.0 * M_PI * k / m;
        points.push_back(ball.center() +
                         r * Vec{{std::cos(th), std::sin(th)}});
      }
    } else if (d == 3) {
      for (const Vec& u : Icosphere(defect, r)) {
        points.push_back(ball.center() + r * u);
      }
    } else {
      throw UnsupportedBodyError("boundary polytope of a ball needs d <= 3");
    }
  }
  const std::size_t n = points.size();
  Discretization disc(DiscretizationKind::kBoundaryPolytope, eps,
                      std::move(points), {}, n);
  if (eps > 0.01) {
    disc.AddWarning("epsilon above 0.01: relaxed range for polytope approximation");
  }
  return disc;
}

}  // namespace fullswap
