#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sharpcheck/base_set.hpp"
#include "sharpcheck/polyhedral.hpp"

namespace sharpcheck {

enum class SecondOrderKind { outer, asymptotic };
enum class NormalKind { frechet, proximal, limiting };
enum class DirectionalKind { limiting, clarke };

inline constexpr const char* kVerifyByOracle = "verify-by-oracle";
inline constexpr const char* kNotTangent = "direction not tangent";

namespace variational_detail {

inline double dir_tol(const Vec& d) { return kMembershipTol * std::max(1.0, d.norm()); }

/// Accumulates leaf rows into a full-dimensional cell.
struct CellBuilder {
  long n;
  PolyCell cell;
  explicit CellBuilder(long dim) : n(dim), cell(PolyCell::all_space(dim)) {}
  void ineq(const Leaf& l, const Vec& a, double b) {
    Vec v = Vec::Zero(n);
    v.segment(l.offset, l.dim) = a;
    cell.ineq.push_back({v, b});
  }
  void eq(const Leaf& l, const Vec& a, double b) {
    Vec v = Vec::Zero(n);
    v.segment(l.offset, l.dim) = a;
    cell.eq.push_back({v, b});
  }
};

inline std::vector<long> active_rows(const Leaf& l, const Vec& z) {
  std::vector<long> out;
  for (size_t i = 0; i < l.cell.ineq.size(); ++i) {
    const auto& r = l.cell.ineq[i];
    if (std::abs(r.normal.dot(z) - r.offset) <= kMembershipTol * std::max(1.0, r.normal.norm()))
      out.push_back(static_cast<long>(i));
  }
  return out;
}

inline bool on_sphere(const Leaf& l, const Vec& z) {
  return std::abs((z - l.center).norm() - l.radius) <= kMembershipTol;
}

inline Vec outward(const Leaf& l, const Vec& z) { return (z - l.center) / l.radius; }

/// Tangent cone of one leaf, lifted into `b`.
inline void leaf_tangent(const Leaf& l, const Vec& y, CellBuilder& b) {
  const Vec z = l.slice(y);
  if (l.is_ball) {
    if (on_sphere(l, z)) b.ineq(l, outward(l, z), 0.0);
    return;
  }
  for (long i : active_rows(l, z)) b.ineq(l, l.cell.ineq[static_cast<size_t>(i)].normal, 0.0);
  for (const auto& r : l.cell.eq) b.eq(l, r.normal, 0.0);
}

/// Second-order object of one leaf; false when d is not tangent to the leaf.
inline bool leaf_second(const Leaf& l, const Vec& y, const Vec& d, SecondOrderKind kind, CellBuilder& b) {
  const Vec z = l.slice(y);
  const Vec e = l.slice(d);
  const double tol = dir_tol(e);
  if (l.is_ball) {
    if (!on_sphere(l, z)) return true;
    const Vec nv = outward(l, z);
    const double nd = nv.dot(e);
    if (nd > tol) return false;
    if (nd < -tol) return true;
    b.ineq(l, nv, kind == SecondOrderKind::outer ? -e.squaredNorm() / l.radius : 0.0);
    return true;
  }
  for (const auto& r : l.cell.eq)
    if (std::abs(r.normal.dot(e)) > tol * std::max(1.0, r.normal.norm())) return false;
  for (long i : active_rows(l, z)) {
    const auto& r = l.cell.ineq[static_cast<size_t>(i)];
    const double ad = r.normal.dot(e);
    const double s = tol * std::max(1.0, r.normal.norm());
    if (ad > s) return false;
    if (ad >= -s) b.ineq(l, r.normal, 0.0);
  }
  for (const auto& r : l.cell.eq) b.eq(l, r.normal, 0.0);
  return true;
}

inline PolyCell piece_tangent(const ConvexPiece& p, const Vec& y) {
  CellBuilder b(p.dim);
  for (const auto& l : p.leaves) leaf_tangent(l, y, b);
  return b.cell;
}

inline std::optional<PolyCell> piece_second(const ConvexPiece& p, const Vec& y, const Vec& d, SecondOrderKind kind) {
  CellBuilder b(p.dim);
  for (const auto& l : p.leaves)
    if (!leaf_second(l, y, d, kind, b)) return std::nullopt;
  return b.cell;
}

inline std::vector<const ConvexPiece*> pieces_at(const std::vector<ConvexPiece>& pieces, const Vec& y) {
  std::vector<const ConvexPiece*> out;
  for (const auto& p : pieces)
    if (piece_contains(p, y)) out.push_back(&p);
  return out;
}

inline void require_member(const BaseSet& s, const Vec& y) {
  require_dim(y.size(), s.dim, "point");
  if (!membership(s, y)) throw DomainError("point is not in the set");
}

/// Fréchet normal cone of the union at a point, as the intersection of piece normal cones.
inline Region frechet_at(const std::vector<ConvexPiece>& pieces, long n, const Vec& x) {
  Region t = Region::empty_cone(n);
  for (const auto* p : pieces_at(pieces, x)) t.cells.push_back(piece_tangent(*p, x));
  return polar_cone(t);
}

/// Flags pairs of members whose tangent cones meet only in a lower-dimensional set.
inline bool touching(const std::vector<PolyCell>& cones) {
  auto full = [](const PolyCell& c) {
    if (!c.eq.empty()) return false;
    return max_margin(c.dim, {}, {}, c.ineq).first > 1e-9;
  };
  for (size_t i = 0; i < cones.size(); ++i)
    for (size_t j = i + 1; j < cones.size(); ++j)
      if (full(cones[i]) && full(cones[j]) && !full(intersect_cells(cones[i], cones[j]))) return true;
  return false;
}

}  // namespace variational_detail

/// Bouligand tangent cone: union over pieces containing y of their tangent cones.
inline Region tangent_cone(const BaseSet& s, const Vec& y) {
  using namespace variational_detail;
  require_member(s, y);
  const auto pieces = convex_pieces(s);
  Region out = Region::empty_cone(s.dim);
  for (const auto* p : pieces_at(pieces, y)) out.cells.push_back(piece_tangent(*p, y));
  if (touching(out.cells)) out.note(kVerifyByOracle);
  return out;
}

/// Outer second-order tangent set or asymptotic second-order tangent cone.
inline Region second_tangent(const BaseSet& s, const Vec& y, const Vec& d, SecondOrderKind kind) {
  using namespace variational_detail;
  require_member(s, y);
  require_dim(d.size(), s.dim, "direction");
  const auto pieces = convex_pieces(s);
  Region out = Region::empty(s.dim);
  out.cone = kind == SecondOrderKind::asymptotic;
  std::vector<PolyCell> tangents;
  for (const auto* p : pieces_at(pieces, y)) {
    tangents.push_back(piece_tangent(*p, y));
    if (auto c = piece_second(*p, y, d, kind)) out.cells.push_back(std::move(*c));
  }
  if (out.cells.empty()) out.note(kNotTangent);
  if (touching(tangents)) out.note(kVerifyByOracle);
  if (kind == SecondOrderKind::outer && out.cells.size() == tangents.size()) {
    bool conic = true;
    for (const auto& c : out.cells) conic &= c.homogeneous();
    out.cone = conic;
  }
  return out;
}

namespace variational_detail {

/// A stratum of one leaf at y: a relative-interior direction and the stratum normal cone rows.
struct LeafStratum {
  Vec direction;  // in leaf coordinates; zero for a single-point stratum
  std::vector<long> rows;
  enum class Type { face, sphere, open_ball } type = Type::face;
};

inline Vec unit_tangent_to(const Vec& nv) {
  const long n = nv.size();
  if (n < 2) return Vec::Zero(n);
  long k = 0;
  for (long i = 1; i < n; ++i)
    if (std::abs(nv(i)) < std::abs(nv(k))) k = i;
  Vec e = linalg::unit(n, k);
  e -= e.dot(nv) * nv;
  return e.normalized();
}

inline std::vector<LeafStratum> leaf_strata(const Leaf& l, const Vec& y, const Vec& u) {
  std::vector<LeafStratum> out;
  const Vec z = l.slice(y);
  const Vec ub = l.slice(u);
  const double tol = dir_tol(ub);
  if (l.is_ball) {
    if (!on_sphere(l, z)) {
      out.push_back({Vec::Zero(l.dim), {}, LeafStratum::Type::open_ball});
      return out;
    }
    const Vec nv = outward(l, z);
    const double nu = nv.dot(ub);
    if (nu > tol) return out;
    if (nu >= -tol) out.push_back({unit_tangent_to(nv), {}, LeafStratum::Type::sphere});
    out.push_back({-nv, {}, LeafStratum::Type::open_ball});
    return out;
  }
  const auto active = active_rows(l, z);
  if (active.size() > 16) throw NumericalError("stratum enumeration cap exceeded");
  const size_t count = size_t{1} << active.size();
  for (size_t mask = 0; mask < count; ++mask) {
    std::vector<long> tight;
    std::vector<LinRow> eq, strict;
    bool ok = true;
    for (size_t j = 0; j < active.size(); ++j) {
      const auto& r = l.cell.ineq[static_cast<size_t>(active[j])];
      const double s = tol * std::max(1.0, r.normal.norm());
      if (mask & (size_t{1} << j)) {
        tight.push_back(active[j]);
        eq.push_back({r.normal, 0.0});
        ok &= std::abs(r.normal.dot(ub)) <= s;
      } else {
        strict.push_back({r.normal, 0.0});
        ok &= r.normal.dot(ub) <= s;
      }
    }
    for (const auto& r : l.cell.eq) {
      eq.push_back({r.normal, 0.0});
      ok &= std::abs(r.normal.dot(ub)) <= tol * std::max(1.0, r.normal.norm());
    }
    if (!ok) continue;
    Vec dir = Vec::Zero(l.dim);
    if (!strict.empty()) {
      std::vector<LinRow> box;
      for (long i = 0; i < l.dim; ++i) {
        box.push_back({linalg::unit(l.dim, i), 1.0});
        box.push_back({-linalg::unit(l.dim, i), 1.0});
      }
      auto [m, pt] = max_margin(l.dim, box, eq, strict);
      if (!(m > 1e-9)) continue;
      dir = pt.normalized();
    }
    out.push_back({dir, tight, LeafStratum::Type::face});
  }
  return out;
}

/// Normal cone of the leaf stratum at a point z (cone{a_J} + span E, cone{n}, or {0}).
inline void stratum_normal(const Leaf& l, const LeafStratum& st, const Vec& z, CellBuilder& b) {
  if (st.type == LeafStratum::Type::open_ball) {
    for (long i = 0; i < l.dim; ++i) b.eq(l, linalg::unit(l.dim, i), 0.0);
    return;
  }
  if (st.type == LeafStratum::Type::sphere) {
    const Vec nv = outward(l, z);
    Mat row(1, l.dim);
    row.row(0) = nv.transpose();
    const Mat perp = linalg::nullspace(row);
    for (long j = 0; j < perp.cols(); ++j) b.eq(l, perp.col(j), 0.0);
    b.ineq(l, -nv, 0.0);
    return;
  }
  PolyCell face = PolyCell::all_space(l.dim);
  for (long i : st.rows) face.add_ineq(l.cell.ineq[static_cast<size_t>(i)].normal, 0.0);
  for (const auto& r : l.cell.eq) face.add_eq(r.normal, 0.0);
  const Region nrm = polar_cone(Region::from_cell(face, true));
  for (const auto& r : nrm.cells.front().ineq) b.ineq(l, r.normal, 0.0);
  for (const auto& r : nrm.cells.front().eq) b.eq(l, r.normal, 0.0);
}

inline Vec stratum_sample(const Leaf& l, const LeafStratum& st, const Vec& y, const Vec& u, double t) {
  constexpr double tau = 0.1;
  const Vec z = l.slice(y);
  Vec step = l.slice(u);
  if (step.norm() > 0) step.normalize();
  step += tau * st.direction;
  Vec x = z + t * step;
  if (st.type == LeafStratum::Type::sphere) x = l.center + l.radius * (x - l.center).normalized();
  return x;
}

/// Directional limiting normals of a union by stratum sampling; u = 0 gives the limiting cone.
inline Region union_limiting(const BaseSet& s, const Vec& y, const Vec& u) {
  const long n = s.dim;
  const auto pieces = convex_pieces(s);
  Region out = Region::empty_cone(n);
  const double ts[] = {1e-2, 3e-3, 1e-3};
  for (const auto* p : pieces_at(pieces, y)) {
    std::vector<std::vector<LeafStratum>> per_leaf;
    bool any = true;
    for (const auto& l : p->leaves) {
      per_leaf.push_back(leaf_strata(l, y, u));
      any &= !per_leaf.back().empty();
    }
    if (!any) continue;
    std::vector<size_t> idx(per_leaf.size(), 0);
    while (true) {
      CellBuilder at_y(n);
      for (size_t k = 0; k < per_leaf.size(); ++k) {
        const Leaf& l = p->leaves[k];
        stratum_normal(l, per_leaf[k][idx[k]], l.slice(y), at_y);
      }
      int verdict = -1;  // 0 trivial, 1 full, 2 partial
      bool consistent = true;
      Region partial = Region::empty_cone(n);
      for (double t : ts) {
        Vec x = y;
        CellBuilder at_x(n);
        for (size_t k = 0; k < per_leaf.size(); ++k) {
          const Leaf& l = p->leaves[k];
          const Vec xb = stratum_sample(l, per_leaf[k][idx[k]], y, u, t);
          x.segment(l.offset, l.dim) = xb;
        }
        for (size_t k = 0; k < per_leaf.size(); ++k) {
          const Leaf& l = p->leaves[k];
          stratum_normal(l, per_leaf[k][idx[k]], l.slice(x), at_x);
        }
        if (!piece_contains(*p, x, 1e-7)) continue;
        const Region fr = frechet_at(pieces, n, x);
        const Region own = Region::from_cell(at_x.cell, true);
        int v;
        if (cone_is_trivial(fr))
          v = 0;
        else if (regions_equal(fr, own))
          v = 1;
        else {
          v = 2;
          partial = fr;
        }
        if (verdict >= 0 && v != verdict) consistent = false;
        verdict = v;
      }
      if (verdict == 1)
        out.cells.push_back(at_y.cell);
      else if (verdict == 2) {
        for (const auto& c : partial.cells) out.cells.push_back(c);
        out.note(kVerifyByOracle);
      }
      if (!consistent) out.note(kVerifyByOracle);
      size_t k = 0;
      while (k < idx.size() && ++idx[k] == per_leaf[k].size()) idx[k++] = 0;
      if (k == idx.size()) break;
    }
  }
  return out;
}

}  // namespace variational_detail

/// Fréchet (polar of the tangent cone), proximal (intersection of member normal cones at y), or
/// limiting (stratum closure) normal cone.
inline Region normal_cone(const BaseSet& s, const Vec& y, NormalKind kind) {
  using namespace variational_detail;
  require_member(s, y);
  const long n = s.dim;
  const auto pieces = convex_pieces(s);
  const auto here = pieces_at(pieces, y);
  switch (kind) {
    case NormalKind::frechet: return polar_cone(tangent_cone(s, y));
    case NormalKind::proximal: {
      PolyCell acc = PolyCell::all_space(n);
      for (const auto* p : here) {
        const Region np = polar_cone(Region::from_cell(piece_tangent(*p, y), true));
        acc = intersect_cells(acc, np.cells.front());
      }
      return Region::from_cell(acc, true);
    }
    case NormalKind::limiting: {
      if (here.size() == 1) return polar_cone(Region::from_cell(piece_tangent(*here.front(), y), true));
      Region out = union_limiting(s, y, Vec::Zero(n));
      out.cells.push_back(PolyCell::origin(n));
      return out;
    }
  }
  return Region::empty_cone(n);
}

/// Directional limiting normal cone (empty when u is not tangent) or its closed convex hull.
inline Region directional_normal(const BaseSet& s, const Vec& y, const Vec& u, DirectionalKind kind) {
  using namespace variational_detail;
  require_member(s, y);
  require_dim(u.size(), s.dim, "direction");
  const long n = s.dim;
  const Region t = tangent_cone(s, y);
  if (!region_contains(t, u, dir_tol(u))) {
    Region out = Region::empty_cone(n);
    out.note(kNotTangent);
    return out;
  }
  Region lim;
  const auto pieces = convex_pieces(s);
  const auto here = pieces_at(pieces, y);
  if (here.size() == 1) {
    lim = intersect_orthocomplement(polar_cone(Region::from_cell(piece_tangent(*here.front(), y), true)), u);
  } else {
    lim = union_limiting(s, y, u);
    lim.cells.push_back(PolyCell::origin(n));
  }
  for (const auto& note : t.notes) lim.note(note);
  if (kind == DirectionalKind::limiting) return lim;
  Region hull = cone_hull(lim);
  hull.notes = lim.notes;
  return hull;
}

/// Polar of the directional Clarke normal cone.
inline Region directional_clarke_tangent(const BaseSet& s, const Vec& y, const Vec& u) {
  const Region nc = directional_normal(s, y, u, DirectionalKind::clarke);
  if (nc.has_note(kNotTangent)) throw DomainError("direction is not tangent");
  Region out = polar_cone(nc);
  return out;
}

/// Clarke tangent cone: polar of the limiting normal cone.
inline Region clarke_tangent(const BaseSet& s, const Vec& y) {
  return polar_cone(normal_cone(s, y, NormalKind::limiting));
}

/// dist(v, N^P_S(x)) <= eps |v|.
inline bool eps_proximal_membership(const BaseSet& s, const Vec& x, const Vec& v, double eps) {
  if (!(eps >= 0.0 && eps < 1.0)) throw DomainError("eps must lie in [0,1)");
  require_dim(v.size(), s.dim, "normal vector");
  const Region np = normal_cone(s, x, NormalKind::proximal);
  if (v.norm() == 0.0) return true;
  return distance_to_region(np, v) <= eps * v.norm() + kMembershipTol;
}

}  // namespace sharpcheck
