#pragma once

#include <vector>

#include "sharpcheck/polyhedral.hpp"

namespace sharpcheck {

/// A relatively open cell of the hyperplane arrangement of a Region, with the Fréchet normal
/// cone of the Region at its points.
struct Stratum {
  PolyCell closure;
  Vec point;
  Region normal;
};

inline constexpr long kArrangementCap = 12;

namespace lower_support_detail {

inline std::vector<LinRow> distinct_hyperplanes(const Region& r) {
  std::vector<LinRow> out;
  auto add = [&](const LinRow& row) {
    const double s = row.normal.norm();
    if (s == 0.0) return;
    LinRow u{row.normal / s, row.offset / s};
    for (const auto& h : out) {
      if ((h.normal - u.normal).norm() < 1e-10 && std::abs(h.offset - u.offset) < 1e-10) return;
      if ((h.normal + u.normal).norm() < 1e-10 && std::abs(h.offset + u.offset) < 1e-10) return;
    }
    out.push_back(u);
  };
  for (const auto& c : r.cells) {
    for (const auto& row : c.ineq) add(row);
    for (const auto& row : c.eq) add(row);
  }
  return out;
}

inline PolyCell tangent_of_cell_at(const PolyCell& c, const Vec& x) {
  PolyCell t = PolyCell::all_space(c.dim);
  for (const auto& r : c.ineq)
    if (std::abs(r.normal.dot(x) - r.offset) <= kMembershipTol * std::max(1.0, r.normal.norm()))
      t.add_ineq(r.normal, 0.0);
  for (const auto& r : c.eq) t.add_eq(r.normal, 0.0);
  return t;
}

}  // namespace lower_support_detail

/// Fréchet normal cone of a union of cells at one of its points.
inline Region region_normal_at(const Region& r, const Vec& x) {
  Region t = Region::empty_cone(r.dim);
  for (const auto& c : r.cells)
    if (cell_contains(c, x)) t.cells.push_back(lower_support_detail::tangent_of_cell_at(c, x));
  return polar_cone(t);
}

/// Strata of the arrangement lying in the Region.
inline std::vector<Stratum> region_strata(const Region& r) {
  using namespace lower_support_detail;
  const long n = r.dim;
  const auto hs = distinct_hyperplanes(r);
  if (static_cast<long>(hs.size()) > kArrangementCap) throw NumericalError("arrangement hyperplane cap exceeded");
  std::vector<Stratum> out;
  std::vector<LinRow> ineq, eq, strict;
  std::function<void(size_t)> rec = [&](size_t k) {
    if (max_margin(n, ineq, eq, strict).first <= 1e-9) return;
    if (k == hs.size()) {
      const Vec x = max_margin(n, ineq, eq, strict).second;
      if (!region_contains(r, x)) return;
      PolyCell cl{n, ineq, eq, std::nullopt};
      for (const auto& s : strict) cl.ineq.push_back(s);
      out.push_back({std::move(cl), x, region_normal_at(r, x)});
      return;
    }
    const LinRow& h = hs[k];
    strict.push_back(h);
    rec(k + 1);
    strict.back() = {-h.normal, -h.offset};
    rec(k + 1);
    strict.pop_back();
    eq.push_back(h);
    rec(k + 1);
    eq.pop_back();
  };
  rec(0);
  return out;
}

namespace lower_support_detail {

/// lim inf of inf over cl G ∩ W of <lam', u> as lam' -> lam inside the normal cone F.
inline ExtendedReal stratum_limit(const PolyCell& region, const Region& normal, const Vec& lam) {
  const long n = region.dim;
  if (cell_is_empty(region)) return ExtendedReal::pos_inf();
  const Generators g = generators_of(region);
  const double tol = 1e-9 * std::max(1.0, lam.norm());
  PolyCell tilt = tangent_of_cell_at(normal.cells.front(), lam);
  for (long i = 0; i < n; ++i) {
    tilt.add_ineq(linalg::unit(n, i), 1.0);
    tilt.add_ineq(-linalg::unit(n, i), 1.0);
  }
  auto tilt_down = [&](const Vec& dir) {
    const auto best = maximize_over_cell(tilt, -dir);
    return best.status == LpStatus::optimal && best.value.value() > 1e-9;
  };
  for (const auto& ray : g.rays) {
    const double v = lam.dot(ray);
    if (v < -tol) return ExtendedReal::neg_inf();
    if (v <= tol && tilt_down(ray)) return ExtendedReal::neg_inf();
  }
  for (const auto& line : g.lines) {
    if (std::abs(lam.dot(line)) > tol) return ExtendedReal::neg_inf();
    if (tilt_down(line) || tilt_down(-line)) return ExtendedReal::neg_inf();
  }
  double best = std::numeric_limits<double>::infinity();
  for (const auto& v : g.vertices) best = std::min(best, lam.dot(v));
  return ExtendedReal::finite(best);
}

}  // namespace lower_support_detail

/// Lower generalized support function of a polyhedral Region with respect to a window.
inline ExtendedReal lower_gen_support(const Region& s, const Region& window, const Vec& lam) {
  require_dim(lam.size(), s.dim, "support direction");
  require_dim(window.dim, s.dim, "window");
  if (region_is_empty(s)) return ExtendedReal::neg_inf();
  ExtendedReal best = ExtendedReal::pos_inf();
  for (const auto& st : region_strata(s)) {
    if (!region_contains(st.normal, lam, 1e-9 * std::max(1.0, lam.norm()))) continue;
    for (const auto& w : window.cells) {
      best = min(best, lower_support_detail::stratum_limit(intersect_cells(st.closure, w), st.normal, lam));
      if (best.is_neg_inf()) return best;
    }
  }
  return best;
}

inline ExtendedReal lower_gen_support(const Region& s, const Vec& lam) {
  return lower_gen_support(s, Region::all_space(s.dim), lam);
}

}  // namespace sharpcheck
