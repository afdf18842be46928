#pragma once

#include <vector>

#include "sharpcheck/region.hpp"

namespace sharpcheck {

/// Double description of {z : G z <= 0, H z = 0}: extreme rays and a lineality basis.
struct ConeDescription {
  std::vector<Vec> rays;
  std::vector<Vec> lineality;
};

namespace dd_detail {

inline constexpr double kZeroTol = 1e-9;

inline Vec unit_or_zero(const Vec& v) {
  const double s = v.norm();
  return s > 0 ? Vec(v / s) : v;
}

inline long rank_of(const std::vector<Vec>& rows, long width) {
  if (rows.empty()) return 0;
  Mat m(static_cast<long>(rows.size()), width);
  for (size_t i = 0; i < rows.size(); ++i) m.row(static_cast<long>(i)) = rows[i].transpose();
  return linalg::rank(m);
}

}  // namespace dd_detail

/// Caps for the incremental (Motzkin) iteration; `max_dim` bounds the cell dimension.
struct DdLimits {
  long max_dim = 8;
  long max_rays = 20000;
};

/// Incremental double description with the algebraic adjacency test.
inline ConeDescription double_description(long width, const std::vector<Vec>& g, const std::vector<Vec>& h,
                                          const DdLimits& limits = {}) {
  using namespace dd_detail;
  if (width - 1 > limits.max_dim) throw NumericalError("double description dimension cap exceeded");
  ConeDescription out;
  {
    Mat hm(static_cast<long>(h.size()), width);
    for (size_t i = 0; i < h.size(); ++i) hm.row(static_cast<long>(i)) = h[i].transpose();
    const Mat basis = linalg::nullspace(hm);
    for (long j = 0; j < basis.cols(); ++j) out.lineality.push_back(basis.col(j));
  }
  std::vector<Vec> processed = h;
  for (const auto& row0 : g) {
    const Vec row = unit_or_zero(row0);
    if (row.norm() == 0.0) continue;
    long pivot = -1;
    double best = kZeroTol;
    for (size_t j = 0; j < out.lineality.size(); ++j) {
      const double v = std::abs(row.dot(out.lineality[j]));
      if (v > best) {
        best = v;
        pivot = static_cast<long>(j);
      }
    }
    if (pivot >= 0) {
      Vec l0 = out.lineality[static_cast<size_t>(pivot)];
      if (row.dot(l0) > 0) l0 = -l0;
      const double gl0 = row.dot(l0);
      std::vector<Vec> lin;
      for (size_t j = 0; j < out.lineality.size(); ++j) {
        if (static_cast<long>(j) == pivot) continue;
        const Vec& l = out.lineality[j];
        lin.push_back(unit_or_zero(l - (row.dot(l) / gl0) * l0));
      }
      for (auto& r : out.rays) r = unit_or_zero(r - (row.dot(r) / gl0) * l0);
      out.rays.push_back(unit_or_zero(l0));
      out.lineality = std::move(lin);
      processed.push_back(row);
      continue;
    }
    std::vector<Vec> pos, neg, zero;
    for (const auto& r : out.rays) {
      const double v = row.dot(r);
      if (v > kZeroTol)
        pos.push_back(r);
      else if (v < -kZeroTol)
        neg.push_back(r);
      else
        zero.push_back(r);
    }
    std::vector<Vec> next = neg;
    next.insert(next.end(), zero.begin(), zero.end());
    const long target = width - static_cast<long>(out.lineality.size()) - 2;
    for (const auto& p : pos)
      for (const auto& q : neg) {
        std::vector<Vec> tight;
        for (const auto& pr : processed)
          if (std::abs(pr.dot(p)) <= kZeroTol && std::abs(pr.dot(q)) <= kZeroTol) tight.push_back(pr);
        if (static_cast<long>(tight.size()) < target) continue;
        if (rank_of(tight, width) != target) continue;
        next.push_back(unit_or_zero(row.dot(p) * q - row.dot(q) * p));
      }
    if (static_cast<long>(next.size()) > limits.max_rays) throw NumericalError("double description ray cap exceeded");
    out.rays = std::move(next);
    processed.push_back(row);
  }
  return out;
}

/// V-form of a cell via the homogenized cone {(x,t) : A x - b t <= 0, E x - e t = 0, t >= 0}.
inline Generators generators_of(const PolyCell& c) {
  if (c.generators) return *c.generators;
  const long n = c.dim;
  std::vector<Vec> g, h;
  Vec tpos = Vec::Zero(n + 1);
  tpos(n) = -1.0;
  g.push_back(tpos);
  for (const auto& r : c.ineq) {
    Vec v(n + 1);
    v.head(n) = r.normal;
    v(n) = -r.offset;
    g.push_back(v);
  }
  for (const auto& r : c.eq) {
    Vec v(n + 1);
    v.head(n) = r.normal;
    v(n) = -r.offset;
    h.push_back(v);
  }
  const auto cd = double_description(n + 1, g, h);
  Generators out;
  for (const auto& z : cd.rays) {
    if (z(n) > dd_detail::kZeroTol)
      out.vertices.push_back(z.head(n) / z(n));
    else
      out.rays.push_back(dd_detail::unit_or_zero(z.head(n)));
  }
  for (const auto& l : cd.lineality) out.lines.push_back(dd_detail::unit_or_zero(l.head(n)));
  return out;
}

inline void cache_generators(PolyCell& c) {
  if (!c.generators) c.generators = generators_of(c);
}

/// H-form from generators (nonempty vertex list required unless the set is empty).
inline PolyCell cell_from_generators(long n, const Generators& gen) {
  PolyCell out{n, {}, {}, std::nullopt};
  if (gen.vertices.empty()) {
    out.ineq.push_back({Vec::Zero(n), -1.0});
    return out;
  }
  // polar of cone{(v,1),(r,0)} + span{(l,0)} in (a, beta): a.v + beta <= 0, a.r <= 0, a.l = 0
  std::vector<Vec> g, h;
  for (const auto& v : gen.vertices) {
    Vec z(n + 1);
    z.head(n) = v;
    z(n) = 1.0;
    g.push_back(z);
  }
  for (const auto& r : gen.rays) {
    Vec z = Vec::Zero(n + 1);
    z.head(n) = r;
    g.push_back(z);
  }
  for (const auto& l : gen.lines) {
    Vec z = Vec::Zero(n + 1);
    z.head(n) = l;
    h.push_back(z);
  }
  const auto cd = double_description(n + 1, g, h);
  for (const auto& y : cd.rays) {
    if (y.head(n).norm() <= dd_detail::kZeroTol) continue;
    out.ineq.push_back({y.head(n), -y(n)});
  }
  for (const auto& y : cd.lineality) {
    if (y.head(n).norm() <= dd_detail::kZeroTol) continue;
    out.eq.push_back({y.head(n), -y(n)});
  }
  out.generators = gen;
  return out;
}

/// Polar cone {y : <y, x> <= 0 for all x in R}; a single cell for any union.
inline Region polar_cone(const Region& r) {
  if (!r.cone) throw DomainError("polar_cone requires a cone-flagged region");
  const long n = r.dim;
  PolyCell out{n, {}, {}, std::nullopt};
  for (const auto& c : r.cells) {
    if (cell_is_empty(c)) continue;
    const Generators gen = generators_of(c);
    for (const auto& ray : gen.rays) out.ineq.push_back({ray, 0.0});
    for (const auto& line : gen.lines) out.eq.push_back({line, 0.0});
  }
  Region res = Region::from_cell(std::move(out), true);
  res.notes = r.notes;
  return res;
}

/// Closed convex conic hull of a union of cones, as the bipolar.
inline Region cone_hull(const Region& r) { return polar_cone(polar_cone(r)); }

/// Minkowski sum of two polyhedral unions (cellwise through generators).
inline Region minkowski_sum(const Region& a, const Region& b) {
  require_dim(b.dim, a.dim, "minkowski sum");
  const long n = a.dim;
  Region out{n, {}, a.cone && b.cone, a.notes};
  for (const auto& n2 : b.notes) out.note(n2);
  for (const auto& ca : a.cells) {
    if (cell_is_empty(ca)) continue;
    const Generators ga = generators_of(ca);
    for (const auto& cb : b.cells) {
      if (cell_is_empty(cb)) continue;
      const Generators gb = generators_of(cb);
      Generators sum;
      for (const auto& u : ga.vertices)
        for (const auto& v : gb.vertices) sum.vertices.push_back(u + v);
      sum.rays = ga.rays;
      sum.rays.insert(sum.rays.end(), gb.rays.begin(), gb.rays.end());
      sum.lines = ga.lines;
      sum.lines.insert(sum.lines.end(), gb.lines.begin(), gb.lines.end());
      out.cells.push_back(cell_from_generators(n, sum));
    }
  }
  return out;
}

/// Dimension of the affine hull of a nonempty cell.
inline long cell_dimension(const PolyCell& c) {
  const Generators gen = generators_of(c);
  if (gen.vertices.empty()) return -1;
  std::vector<Vec> dirs;
  for (size_t i = 1; i < gen.vertices.size(); ++i) dirs.push_back(gen.vertices[i] - gen.vertices[0]);
  dirs.insert(dirs.end(), gen.rays.begin(), gen.rays.end());
  dirs.insert(dirs.end(), gen.lines.begin(), gen.lines.end());
  return dd_detail::rank_of(dirs, c.dim);
}

}  // namespace sharpcheck
