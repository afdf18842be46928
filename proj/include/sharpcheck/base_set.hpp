#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "sharpcheck/region.hpp"

namespace sharpcheck {

/// Constructive description of a closed set in the catalog.
struct BaseSet {
  enum class Kind { interval, box, halfspace, polyhedron, ball, point, finite, union_of, product };

  Kind kind = Kind::point;
  long dim = 0;
  std::vector<std::pair<double, double>> bounds;  // interval, box
  std::vector<LinRow> rows;                       // halfspace, polyhedron
  std::vector<LinRow> eqs;                        // polyhedron
  Vec center;                                     // ball
  double radius = 0.0;                            // ball
  std::vector<Vec> points;                        // point, finite
  std::vector<BaseSet> members;                   // union, product

  static BaseSet interval(double lo, double hi) {
    if (!(lo <= hi)) throw InputError("interval requires lo <= hi");
    BaseSet s;
    s.kind = Kind::interval;
    s.dim = 1;
    s.bounds = {{lo, hi}};
    return s;
  }
  static BaseSet box(std::vector<std::pair<double, double>> b) {
    if (b.empty()) throw InputError("box requires at least one coordinate");
    for (const auto& [lo, hi] : b)
      if (!(lo <= hi)) throw InputError("box requires lo <= hi");
    BaseSet s;
    s.kind = Kind::box;
    s.dim = static_cast<long>(b.size());
    s.bounds = std::move(b);
    return s;
  }
  static BaseSet halfspace(Vec normal, double offset) {
    if (normal.norm() == 0.0) throw InputError("halfspace normal must be nonzero");
    BaseSet s;
    s.kind = Kind::halfspace;
    s.dim = normal.size();
    s.rows = {{std::move(normal), offset}};
    return s;
  }
  static BaseSet polyhedron(long n, std::vector<LinRow> ineq, std::vector<LinRow> eq) {
    for (const auto& r : ineq) require_dim(r.normal.size(), n, "polyhedron row");
    for (const auto& r : eq) require_dim(r.normal.size(), n, "polyhedron equality");
    BaseSet s;
    s.kind = Kind::polyhedron;
    s.dim = n;
    s.rows = std::move(ineq);
    s.eqs = std::move(eq);
    if (cell_is_empty(PolyCell{n, s.rows, s.eqs, std::nullopt})) throw InputError("polyhedron is empty");
    return s;
  }
  static BaseSet ball(Vec c, double r) {
    if (!(r > 0.0)) throw InputError("ball radius must be positive");
    BaseSet s;
    s.kind = Kind::ball;
    s.dim = c.size();
    s.center = std::move(c);
    s.radius = r;
    return s;
  }
  static BaseSet point(Vec p) {
    BaseSet s;
    s.kind = Kind::point;
    s.dim = p.size();
    s.points = {std::move(p)};
    return s;
  }
  static BaseSet finite(std::vector<Vec> pts) {
    if (pts.empty()) throw InputError("finite set must be non-empty");
    BaseSet s;
    s.kind = Kind::finite;
    s.dim = pts.front().size();
    for (const auto& p : pts) require_dim(p.size(), s.dim, "finite set point");
    s.points = std::move(pts);
    return s;
  }
  static BaseSet union_of(std::vector<BaseSet> m) {
    if (m.empty()) throw InputError("union must be non-empty");
    BaseSet s;
    s.kind = Kind::union_of;
    s.dim = m.front().dim;
    for (const auto& x : m) require_dim(x.dim, s.dim, "union member");
    s.members = std::move(m);
    return s;
  }
  static BaseSet product(std::vector<BaseSet> m) {
    if (m.empty()) throw InputError("product must be non-empty");
    BaseSet s;
    s.kind = Kind::product;
    for (const auto& x : m) s.dim += x.dim;
    s.members = std::move(m);
    return s;
  }
};

inline const char* to_string(BaseSet::Kind k) {
  switch (k) {
    case BaseSet::Kind::interval: return "interval";
    case BaseSet::Kind::box: return "box";
    case BaseSet::Kind::halfspace: return "halfspace";
    case BaseSet::Kind::polyhedron: return "polyhedron";
    case BaseSet::Kind::ball: return "ball";
    case BaseSet::Kind::point: return "point";
    case BaseSet::Kind::finite: return "finite";
    case BaseSet::Kind::union_of: return "union";
    case BaseSet::Kind::product: return "product";
  }
  return "?";
}

// ---------------------------------------------------------------------------------------------
// convex pieces: every catalog set is a finite union of products of polyhedra and balls

/// One convex factor acting on coordinates [offset, offset + dim).
struct Leaf {
  bool is_ball = false;
  long offset = 0;
  long dim = 0;
  PolyCell cell;  // polyhedral factor
  bool is_box = false;
  Vec center;  // ball factor
  double radius = 0.0;

  [[nodiscard]] Vec slice(const Vec& y) const { return y.segment(offset, dim); }
};

struct ConvexPiece {
  long dim = 0;
  std::vector<Leaf> leaves;
};

namespace base_set_detail {

inline PolyCell box_cell(const std::vector<std::pair<double, double>>& b) {
  const long n = static_cast<long>(b.size());
  PolyCell c = PolyCell::all_space(n);
  for (long i = 0; i < n; ++i) {
    const auto [lo, hi] = b[static_cast<size_t>(i)];
    if (lo == hi) {
      c.add_eq(linalg::unit(n, i), lo);
      continue;
    }
    if (std::isfinite(hi)) c.add_ineq(linalg::unit(n, i), hi);
    if (std::isfinite(lo)) c.add_ineq(-linalg::unit(n, i), -lo);
  }
  return c;
}

inline constexpr size_t kPieceCap = 4096;

inline std::vector<ConvexPiece> flatten(const BaseSet& s, long offset) {
  auto leaf_piece = [&](Leaf l) {
    l.offset = offset;
    return std::vector<ConvexPiece>{ConvexPiece{s.dim, {std::move(l)}}};
  };
  switch (s.kind) {
    case BaseSet::Kind::interval:
    case BaseSet::Kind::box: {
      Leaf l;
      l.dim = s.dim;
      l.cell = box_cell(s.bounds);
      l.is_box = true;
      return leaf_piece(std::move(l));
    }
    case BaseSet::Kind::halfspace:
    case BaseSet::Kind::polyhedron: {
      Leaf l;
      l.dim = s.dim;
      l.cell = PolyCell{s.dim, s.rows, s.eqs, std::nullopt};
      return leaf_piece(std::move(l));
    }
    case BaseSet::Kind::ball: {
      Leaf l;
      l.is_ball = true;
      l.dim = s.dim;
      l.center = s.center;
      l.radius = s.radius;
      return leaf_piece(std::move(l));
    }
    case BaseSet::Kind::point:
    case BaseSet::Kind::finite: {
      std::vector<ConvexPiece> out;
      for (const auto& p : s.points) {
        std::vector<std::pair<double, double>> b;
        for (long i = 0; i < p.size(); ++i) b.push_back({p(i), p(i)});
        Leaf l;
        l.dim = s.dim;
        l.offset = offset;
        l.cell = box_cell(b);
        l.is_box = true;
        out.push_back(ConvexPiece{s.dim, {std::move(l)}});
      }
      return out;
    }
    case BaseSet::Kind::union_of: {
      std::vector<ConvexPiece> out;
      for (const auto& m : s.members) {
        auto sub = flatten(m, offset);
        out.insert(out.end(), sub.begin(), sub.end());
      }
      if (out.size() > kPieceCap) throw NumericalError("convex piece cap exceeded");
      return out;
    }
    case BaseSet::Kind::product: {
      std::vector<ConvexPiece> out{ConvexPiece{0, {}}};
      long off = offset;
      for (const auto& m : s.members) {
        const auto sub = flatten(m, off);
        std::vector<ConvexPiece> next;
        for (const auto& a : out)
          for (const auto& b : sub) {
            ConvexPiece c{a.dim + b.dim, a.leaves};
            c.leaves.insert(c.leaves.end(), b.leaves.begin(), b.leaves.end());
            next.push_back(std::move(c));
          }
        if (next.size() > kPieceCap) throw NumericalError("convex piece cap exceeded");
        out = std::move(next);
        off += m.dim;
      }
      return out;
    }
  }
  return {};
}

}  // namespace base_set_detail

inline std::vector<ConvexPiece> convex_pieces(const BaseSet& s) { return base_set_detail::flatten(s, 0); }

// ---------------------------------------------------------------------------------------------
// membership and distance

inline bool leaf_contains(const Leaf& l, const Vec& y, double tol = kMembershipTol) {
  const Vec z = l.slice(y);
  if (l.is_ball) return (z - l.center).norm() <= l.radius + tol;
  return cell_contains(l.cell, z, tol);
}

inline bool piece_contains(const ConvexPiece& p, const Vec& y, double tol = kMembershipTol) {
  for (const auto& l : p.leaves)
    if (!leaf_contains(l, y, tol)) return false;
  return true;
}

inline bool membership(const BaseSet& s, const Vec& y, double tol = kMembershipTol) {
  require_dim(y.size(), s.dim, "membership point");
  for (const auto& p : convex_pieces(s))
    if (piece_contains(p, y, tol)) return true;
  return false;
}

/// Projection of the slice of y onto one leaf.
inline Vec project_leaf(const Leaf& l, const Vec& y) {
  const Vec z = l.slice(y);
  if (l.is_ball) {
    const Vec r = z - l.center;
    const double s = r.norm();
    if (s <= l.radius) return z;
    return l.center + (l.radius / s) * r;
  }
  if (l.is_box) {
    Vec out = z;
    for (long i = 0; i < l.dim; ++i) {
      double lo = -std::numeric_limits<double>::infinity(), hi = std::numeric_limits<double>::infinity();
      for (const auto& row : l.cell.ineq) {
        if (row.normal(i) > 0) hi = std::min(hi, row.offset);
        if (row.normal(i) < 0) lo = std::max(lo, -row.offset);
      }
      for (const auto& row : l.cell.eq)
        if (row.normal(i) != 0) lo = hi = row.offset;
      out(i) = std::clamp(z(i), lo, hi);
    }
    return out;
  }
  const auto p = project_onto_cell(l.cell, z);
  if (p.points.empty()) throw NumericalError("projection onto polyhedral leaf failed");
  return p.points.front();
}

inline Vec project_piece(const ConvexPiece& p, const Vec& y) {
  Vec out = y;
  for (const auto& l : p.leaves) out.segment(l.offset, l.dim) = project_leaf(l, y);
  return out;
}

struct DistanceResult {
  double distance = 0.0;
  std::vector<Vec> projections;
};

/// Euclidean distance and all nearest points over the convex pieces.
inline DistanceResult exact_distance(const BaseSet& s, const Vec& y) {
  require_dim(y.size(), s.dim, "distance point");
  DistanceResult out;
  out.distance = std::numeric_limits<double>::infinity();
  std::vector<std::pair<double, Vec>> cands;
  for (const auto& p : convex_pieces(s)) {
    Vec x = project_piece(p, y);
    cands.push_back({(x - y).norm(), std::move(x)});
  }
  for (const auto& [d, _] : cands) out.distance = std::min(out.distance, d);
  for (const auto& [d, x] : cands) {
    if (d > out.distance + 1e-12) continue;
    bool dup = false;
    for (const auto& q : out.projections) dup |= (q - x).norm() < 1e-12;
    if (!dup) out.projections.push_back(x);
  }
  return out;
}

/// True when every piece is polyhedral (no ball factors).
inline bool is_polyhedral(const BaseSet& s) {
  for (const auto& p : convex_pieces(s))
    for (const auto& l : p.leaves)
      if (l.is_ball) return false;
  return true;
}

/// True when the set is a single convex piece.
inline bool is_convex_piece(const BaseSet& s) { return convex_pieces(s).size() == 1; }

/// The polyhedral set as a Region (error when a ball factor is present).
inline Region as_region(const BaseSet& s) {
  Region out = Region::empty(s.dim);
  for (const auto& p : convex_pieces(s)) {
    PolyCell c = PolyCell::all_space(s.dim);
    for (const auto& l : p.leaves) {
      if (l.is_ball) throw DomainError("set is not polyhedral");
      for (const auto& r : l.cell.ineq) {
        Vec a = Vec::Zero(s.dim);
        a.segment(l.offset, l.dim) = r.normal;
        c.add_ineq(a, r.offset);
      }
      for (const auto& r : l.cell.eq) {
        Vec a = Vec::Zero(s.dim);
        a.segment(l.offset, l.dim) = r.normal;
        c.add_eq(a, r.offset);
      }
    }
    out.cells.push_back(std::move(c));
  }
  return out;
}

}  // namespace sharpcheck
