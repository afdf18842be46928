#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sharpcheck/extended_real.hpp"
#include "sharpcheck/linalg.hpp"
#include "sharpcheck/lp.hpp"

namespace sharpcheck {

/// Absolute tolerance on constraint residuals for every membership decision.
inline constexpr double kMembershipTol = 1e-9;

/// Vertices, rays and lines; the set is conv(vertices) + cone(rays) + span(lines).
struct Generators {
  std::vector<Vec> vertices;
  std::vector<Vec> rays;
  std::vector<Vec> lines;
};

/// A closed convex polyhedron in H-form, optionally carrying its V-form.
struct PolyCell {
  long dim = 0;
  std::vector<LinRow> ineq;
  std::vector<LinRow> eq;
  std::optional<Generators> generators;

  static PolyCell all_space(long n) { return PolyCell{n, {}, {}, std::nullopt}; }
  static PolyCell origin(long n) {
    PolyCell c{n, {}, {}, std::nullopt};
    for (long i = 0; i < n; ++i) c.eq.push_back({linalg::unit(n, i), 0.0});
    return c;
  }
  /// `normal . x <= offset`
  PolyCell& add_ineq(Vec normal, double offset) {
    require_dim(normal.size(), dim, "cell row");
    ineq.push_back({std::move(normal), offset});
    generators.reset();
    return *this;
  }
  PolyCell& add_eq(Vec normal, double offset) {
    require_dim(normal.size(), dim, "cell row");
    eq.push_back({std::move(normal), offset});
    generators.reset();
    return *this;
  }
  [[nodiscard]] bool homogeneous() const {
    for (const auto& r : ineq)
      if (std::abs(r.offset) > kMembershipTol) return false;
    for (const auto& r : eq)
      if (std::abs(r.offset) > kMembershipTol) return false;
    return true;
  }
};

/// Finite union of polyhedral cells; the carrier of every derived tangent and normal object.
struct Region {
  long dim = 0;
  std::vector<PolyCell> cells;
  /// Set when the represented set is invariant under nonnegative scaling.
  bool cone = false;
  /// Free-form flags attached by producers ("verify-by-oracle", "inclusion-only", ...).
  std::vector<std::string> notes;

  static Region empty(long n) { return Region{n, {}, false, {}}; }
  static Region empty_cone(long n) { return Region{n, {}, true, {}}; }
  static Region all_space(long n) { return Region{n, {PolyCell::all_space(n)}, true, {}}; }
  static Region origin(long n) { return Region{n, {PolyCell::origin(n)}, true, {}}; }
  static Region from_cell(PolyCell c, bool is_cone) {
    const long n = c.dim;
    return Region{n, {std::move(c)}, is_cone, {}};
  }
  Region& note(std::string s) {
    for (const auto& n : notes)
      if (n == s) return *this;
    notes.push_back(std::move(s));
    return *this;
  }
  [[nodiscard]] bool has_note(const std::string& s) const {
    for (const auto& n : notes)
      if (n == s) return true;
    return false;
  }
};

// ---------------------------------------------------------------------------------------------
// membership, emptiness, linear optimization

inline bool cell_contains(const PolyCell& c, const Vec& y, double tol = kMembershipTol) {
  require_dim(y.size(), c.dim, "point");
  for (const auto& r : c.ineq)
    if (r.normal.dot(y) - r.offset > tol) return false;
  for (const auto& r : c.eq)
    if (std::abs(r.normal.dot(y) - r.offset) > tol) return false;
  return true;
}

inline bool region_contains(const Region& r, const Vec& y, double tol = kMembershipTol) {
  require_dim(y.size(), r.dim, "point");
  for (const auto& c : r.cells)
    if (cell_contains(c, y, tol)) return true;
  return false;
}

inline bool cell_is_empty(const PolyCell& c) {
  if (c.ineq.empty() && c.eq.empty()) return false;
  return !std::isfinite(max_margin(c.dim, c.ineq, c.eq, {}).first);
}

inline bool region_is_empty(const Region& r) {
  for (const auto& c : r.cells)
    if (!cell_is_empty(c)) return false;
  return true;
}

/// A point of the cell, or nullopt when empty.
inline std::optional<Vec> cell_point(const PolyCell& c) {
  if (c.ineq.empty() && c.eq.empty()) return Vec::Zero(c.dim);
  auto [m, x] = max_margin(c.dim, c.ineq, c.eq, {});
  if (!std::isfinite(m)) return std::nullopt;
  return x;
}

inline LpOutcome maximize_over_cell(const PolyCell& c, const Vec& objective) {
  require_dim(objective.size(), c.dim, "objective");
  return solve_lp(LinearProgram{objective, c.ineq, c.eq});
}

/// sup over the cell of <lam, u>; -inf when empty.
inline ExtendedReal support_cell(const PolyCell& c, const Vec& lam) { return maximize_over_cell(c, lam).value; }

/// Support function of a union: max over cells, -inf for the empty union.
inline ExtendedReal support(const Region& r, const Vec& lam) {
  require_dim(lam.size(), r.dim, "support direction");
  ExtendedReal best = ExtendedReal::neg_inf();
  for (const auto& c : r.cells) {
    best = max(best, support_cell(c, lam));
    if (best.is_pos_inf()) break;
  }
  return best;
}

/// inf over the region of <c, u>; +inf for the empty union.
inline ExtendedReal infimum(const Region& r, const Vec& c) { return -support(r, -c); }

// ---------------------------------------------------------------------------------------------
// algebra

inline PolyCell intersect_cells(const PolyCell& a, const PolyCell& b) {
  require_dim(b.dim, a.dim, "cell intersection");
  PolyCell out{a.dim, a.ineq, a.eq, std::nullopt};
  out.ineq.insert(out.ineq.end(), b.ineq.begin(), b.ineq.end());
  out.eq.insert(out.eq.end(), b.eq.begin(), b.eq.end());
  return out;
}

/// Cellwise intersection; empty pairs are dropped.
inline Region intersect(const Region& a, const Region& b) {
  require_dim(b.dim, a.dim, "region intersection");
  Region out{a.dim, {}, a.cone && b.cone, a.notes};
  for (const auto& n : b.notes) out.note(n);
  for (const auto& ca : a.cells)
    for (const auto& cb : b.cells) {
      PolyCell c = intersect_cells(ca, cb);
      if (!cell_is_empty(c)) out.cells.push_back(std::move(c));
    }
  return out;
}

inline Region union_of(const Region& a, const Region& b) {
  require_dim(b.dim, a.dim, "region union");
  Region out = a;
  out.cone = a.cone && b.cone;
  out.cells.insert(out.cells.end(), b.cells.begin(), b.cells.end());
  for (const auto& n : b.notes) out.note(n);
  return out;
}

/// Drops infeasible cells.
inline Region pruned(const Region& r) {
  Region out{r.dim, {}, r.cone, r.notes};
  for (const auto& c : r.cells)
    if (!cell_is_empty(c)) out.cells.push_back(c);
  return out;
}

/// {w : M w + c in R}
inline Region affine_preimage(const Region& r, const Mat& m, const Vec& c) {
  require_dim(m.rows(), r.dim, "preimage matrix rows");
  require_dim(c.size(), r.dim, "preimage shift");
  const long n = m.cols();
  Region out{n, {}, r.cone && c.norm() == 0.0, r.notes};
  for (const auto& cell : r.cells) {
    PolyCell pc{n, {}, {}, std::nullopt};
    for (const auto& row : cell.ineq) pc.ineq.push_back({m.transpose() * row.normal, row.offset - row.normal.dot(c)});
    for (const auto& row : cell.eq) pc.eq.push_back({m.transpose() * row.normal, row.offset - row.normal.dot(c)});
    out.cells.push_back(std::move(pc));
  }
  return out;
}

/// R ∩ {d}^⊥
inline Region intersect_orthocomplement(const Region& r, const Vec& d) {
  require_dim(d.size(), r.dim, "orthocomplement direction");
  Region out = r;
  for (auto& cell : out.cells) cell.add_eq(d, 0.0);
  return out;
}

/// R + c
inline Region translate(const Region& r, const Vec& c) {
  require_dim(c.size(), r.dim, "translation");
  Region out = r;
  out.cone = r.cone && c.norm() == 0.0;
  for (auto& cell : out.cells) {
    for (auto& row : cell.ineq) row.offset += row.normal.dot(c);
    for (auto& row : cell.eq) row.offset += row.normal.dot(c);
    if (cell.generators) {
      for (auto& v : cell.generators->vertices) v += c;
    }
  }
  return out;
}

/// Adds `normal . x <= offset` to every cell.
inline Region with_ineq(const Region& r, const Vec& normal, double offset) {
  Region out = r;
  if (offset != 0.0) out.cone = false;
  for (auto& cell : out.cells) cell.add_ineq(normal, offset);
  return out;
}

inline PolyCell product_cells(const PolyCell& a, const PolyCell& b) {
  const long n = a.dim + b.dim;
  PolyCell out{n, {}, {}, std::nullopt};
  auto lift = [&](const LinRow& r, bool first) {
    Vec v = Vec::Zero(n);
    if (first)
      v.head(a.dim) = r.normal;
    else
      v.tail(b.dim) = r.normal;
    return LinRow{v, r.offset};
  };
  for (const auto& r : a.ineq) out.ineq.push_back(lift(r, true));
  for (const auto& r : a.eq) out.eq.push_back(lift(r, true));
  for (const auto& r : b.ineq) out.ineq.push_back(lift(r, false));
  for (const auto& r : b.eq) out.eq.push_back(lift(r, false));
  return out;
}

/// Cartesian product, cellwise.
inline Region product(const Region& a, const Region& b) {
  Region out{a.dim + b.dim, {}, a.cone && b.cone, a.notes};
  for (const auto& n : b.notes) out.note(n);
  for (const auto& ca : a.cells)
    for (const auto& cb : b.cells) out.cells.push_back(product_cells(ca, cb));
  return out;
}

// ---------------------------------------------------------------------------------------------
// comparison

enum class Relation { equal, strict_subset, strict_superset, incomparable };

inline const char* to_string(Relation r) {
  switch (r) {
    case Relation::equal: return "equal";
    case Relation::strict_subset: return "strict_subset";
    case Relation::strict_superset: return "strict_superset";
    case Relation::incomparable: return "incomparable";
  }
  return "?";
}

struct Comparison {
  Relation relation = Relation::incomparable;
  bool first_empty = false;
  bool second_empty = false;
};

namespace region_detail {

inline LinRow unit_row(const LinRow& r) {
  const double s = r.normal.norm();
  if (s == 0.0) return r;
  return {r.normal / s, r.offset / s};
}

/// A relatively open piece: closed rows plus strict rows `normal . x < offset`.
struct Piece {
  std::vector<LinRow> ineq;
  std::vector<LinRow> eq;
  std::vector<LinRow> strict;
};

inline constexpr double kStrictMargin = 1e-9;

inline bool piece_nonempty(long n, const Piece& p) {
  return max_margin(n, p.ineq, p.eq, p.strict).first > kStrictMargin;
}

}  // namespace region_detail

/// True iff the cell is covered by the union `r` (exact up to the strict margin).
inline bool cell_subset_of(const PolyCell& c, const Region& r) {
  using namespace region_detail;
  require_dim(r.dim, c.dim, "subset test");
  Piece root;
  for (const auto& row : c.ineq) root.ineq.push_back(unit_row(row));
  for (const auto& row : c.eq) root.eq.push_back(unit_row(row));
  if (!std::isfinite(max_margin(c.dim, root.ineq, root.eq, {}).first)) return true;
  std::vector<Piece> pieces{root};
  for (const auto& d : r.cells) {
    std::vector<Piece> next;
    std::vector<std::pair<LinRow, bool>> rows;  // (row, is_eq)
    for (const auto& row : d.ineq) rows.push_back({unit_row(row), false});
    for (const auto& row : d.eq) rows.push_back({unit_row(row), true});
    for (const auto& p : pieces) {
      // p \ d = union over k of p ∩ {violate row k} ∩ {rows < k hold}
      Piece acc = p;
      for (const auto& [row, is_eq] : rows) {
        std::vector<LinRow> violations;
        violations.push_back({-row.normal, -row.offset});  // normal . x > offset
        if (is_eq) violations.push_back(row);               // normal . x < offset
        for (const auto& v : violations) {
          Piece q = acc;
          q.strict.push_back(v);
          if (piece_nonempty(c.dim, q)) next.push_back(std::move(q));
        }
        if (is_eq)
          acc.eq.push_back(row);
        else
          acc.ineq.push_back(row);
        if (!std::isfinite(max_margin(c.dim, acc.ineq, acc.eq, acc.strict).first)) break;
      }
    }
    pieces = std::move(next);
    if (pieces.empty()) return true;
  }
  return pieces.empty();
}

inline bool region_subset_of(const Region& a, const Region& b) {
  for (const auto& c : a.cells)
    if (!cell_subset_of(c, b)) return false;
  return true;
}

/// Decides mutual inclusion by LP feasibility of the violation systems.
inline Comparison region_compare(const Region& a, const Region& b) {
  require_dim(b.dim, a.dim, "region compare");
  Comparison out;
  out.first_empty = region_is_empty(a);
  out.second_empty = region_is_empty(b);
  const bool ab = region_subset_of(a, b);
  const bool ba = region_subset_of(b, a);
  if (ab && ba)
    out.relation = Relation::equal;
  else if (ab)
    out.relation = Relation::strict_subset;
  else if (ba)
    out.relation = Relation::strict_superset;
  else
    out.relation = Relation::incomparable;
  return out;
}

inline bool regions_equal(const Region& a, const Region& b) {
  return region_compare(a, b).relation == Relation::equal;
}

// ---------------------------------------------------------------------------------------------
// cones

/// True iff every cell is {0} or empty: 2n bounded LPs per cell probing each signed axis.
inline bool cone_is_trivial(const Region& r) {
  if (!r.cone) throw DomainError("cone_is_trivial requires a cone-flagged region");
  const long n = r.dim;
  for (const auto& c : r.cells) {
    PolyCell boxed = c;
    for (long i = 0; i < n; ++i) {
      boxed.ineq.push_back({linalg::unit(n, i), 1.0});
      boxed.ineq.push_back({-linalg::unit(n, i), 1.0});
    }
    for (long i = 0; i < n; ++i)
      for (double s : {1.0, -1.0}) {
        const auto out = maximize_over_cell(boxed, s * linalg::unit(n, i));
        if (out.status == LpStatus::optimal && out.value.value() > 1e-9) return false;
      }
  }
  return true;
}

/// True iff <c, w> < 0 for every nonzero w in the cone.
inline bool strict_negativity_on_cone(const Region& r, const Vec& c) {
  if (!r.cone) throw DomainError("strict_negativity_on_cone requires a cone-flagged region");
  require_dim(c.size(), r.dim, "strict negativity direction");
  Region probe = with_ineq(r, -c, 0.0);  // <c, w> >= 0
  probe.cone = true;
  return cone_is_trivial(probe);
}

// ---------------------------------------------------------------------------------------------
// projection

struct Projection {
  double distance = std::numeric_limits<double>::infinity();
  std::vector<Vec> points;
};

namespace region_detail {

inline void for_each_subset(long count, long max_size, const std::function<void(const std::vector<long>&)>& fn) {
  std::vector<long> idx;
  std::function<void(long)> rec = [&](long start) {
    fn(idx);
    if (static_cast<long>(idx.size()) == max_size) return;
    for (long i = start; i < count; ++i) {
      idx.push_back(i);
      rec(i + 1);
      idx.pop_back();
    }
  };
  rec(0);
}

}  // namespace region_detail

/// Euclidean projection onto a cell by face enumeration: project onto the affine hull of each
/// candidate active set and keep the nearest feasible candidate.
inline Projection project_onto_cell(const PolyCell& c, const Vec& y, double tol = kMembershipTol) {
  require_dim(y.size(), c.dim, "projection point");
  Projection out;
  if (cell_contains(c, y, tol)) {
    out.distance = 0.0;
    out.points.push_back(y);
    return out;
  }
  const long n = c.dim;
  const long neq = static_cast<long>(c.eq.size());
  const long ni = static_cast<long>(c.ineq.size());
  if (ni > 24) throw NumericalError("projection face enumeration cap exceeded");
  Vec best;
  region_detail::for_each_subset(ni, n, [&](const std::vector<long>& subset) {
    const long k = neq + static_cast<long>(subset.size());
    Vec cand = y;
    if (k > 0) {
      Mat m(k, n);
      Vec rhs(k);
      for (long i = 0; i < neq; ++i) {
        m.row(i) = c.eq[static_cast<size_t>(i)].normal.transpose();
        rhs(i) = c.eq[static_cast<size_t>(i)].offset;
      }
      for (size_t j = 0; j < subset.size(); ++j) {
        const auto& row = c.ineq[static_cast<size_t>(subset[j])];
        m.row(neq + static_cast<long>(j)) = row.normal.transpose();
        rhs(neq + static_cast<long>(j)) = row.offset;
      }
      Eigen::CompleteOrthogonalDecomposition<Mat> cod(m);
      const Vec shift = cod.solve(m * y - rhs);
      if ((m * (y - shift) - rhs).norm() > 1e-9 * (1.0 + rhs.norm())) return;  // inconsistent active set
      cand = y - shift;
    }
    if (!cell_contains(c, cand, std::max(tol, 1e-12 * (1.0 + cand.norm())))) return;
    const double dist = (cand - y).norm();
    if (dist < out.distance - 1e-15) {
      out.distance = dist;
      best = cand;
    }
  });
  if (best.size() > 0) out.points.push_back(best);
  return out;
}

/// Distance to a union of cells; all cells achieving the minimum contribute a projection.
inline Projection project_onto_region(const Region& r, const Vec& y) {
  Projection out;
  std::vector<std::pair<double, Vec>> cands;
  for (const auto& c : r.cells) {
    if (cell_is_empty(c)) continue;
    auto p = project_onto_cell(c, y);
    if (!p.points.empty()) cands.push_back({p.distance, p.points.front()});
  }
  for (const auto& [d, _] : cands) out.distance = std::min(out.distance, d);
  for (const auto& [d, x] : cands) {
    if (d > out.distance + 1e-12) continue;
    bool dup = false;
    for (const auto& q : out.points) dup |= (q - x).norm() < 1e-12;
    if (!dup) out.points.push_back(x);
  }
  return out;
}

inline double distance_to_region(const Region& r, const Vec& y) { return project_onto_region(r, y).distance; }

}  // namespace sharpcheck
