#pragma once

#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "sharpcheck/lower_support.hpp"
#include "sharpcheck/oracles.hpp"
#include "sharpcheck/polyhedral.hpp"
#include "sharpcheck/problem.hpp"
#include "sharpcheck/variational.hpp"

namespace sharpcheck {

inline const std::string kInclusionOnly = "inclusion-only";
inline const std::string kUpperSet = "upper-set";

enum class Level { point, level_set };

/// Solutions of grad g(x)^T lam = -grad f(x): lam0 + span(basis columns).
struct MultiplierAffineSet {
  Vec lam0;
  Mat basis;
  bool empty = false;

  [[nodiscard]] Region region() const {
    const long m = lam0.size();
    if (empty) return Region::empty(m);
    PolyCell c = PolyCell::all_space(m);
    if (basis.cols() < m) {
      const Mat perp = linalg::nullspace(basis.transpose());
      for (long j = 0; j < perp.cols(); ++j) c.add_eq(perp.col(j), perp.col(j).dot(lam0));
    }
    return Region::from_cell(c, false);
  }
};

inline MultiplierAffineSet multiplier_affine_set(const ProblemInstance& p, const Vec& x) {
  const Mat jt = p.g_jet(x).jacobian.transpose();
  const Vec rhs = -p.f.gradient(x);
  MultiplierAffineSet out;
  out.lam0 = jt.completeOrthogonalDecomposition().solve(rhs);
  out.basis = linalg::nullspace(jt);
  if ((jt * out.lam0 - rhs).norm() > 1e-9) {
    out.empty = true;
    out.lam0 = Vec::Zero(p.m);
    out.basis = Mat::Zero(p.m, 0);
  }
  return out;
}

namespace certify_detail {

inline void require_feasible(const ProblemInstance& p, const Vec& x) {
  require_dim(x.size(), p.n, "point");
  if (!p.feasible(x)) throw DomainError("point is infeasible");
}

/// Points of S near xbar: projections of a seeded cloud onto S; boundary points when the cloud point lies outside.
inline std::vector<Vec> points_of_S(const ProblemInstance& p, double radius, long count, bool boundary_only) {
  std::vector<Vec> out;
  std::mt19937_64 rng(item_seed(p.options.seed, 0x5eed));
  for (long k = 0; k < count; ++k) {
    const Vec y = p.xbar + oracle_detail::uniform_in_ball(rng, p.n, radius);
    const auto dr = exact_distance(p.S, y);
    if (dr.projections.empty()) continue;
    if (boundary_only && dr.distance == 0.0) continue;
    out.push_back(dr.projections.front());
  }
  if (!boundary_only || !cone_is_trivial(normal_cone(p.S, p.xbar, NormalKind::limiting))) out.push_back(p.xbar);
  return out;
}

/// Whether g is constant on S near xbar, so the level-set objects reduce to the ordinary ones.
inline bool g_constant_on_S(const ProblemInstance& p) {
  const Vec g0 = p.g_value(p.xbar);
  for (const Vec& u : points_of_S(p, p.options.delta, 200, false))
    if ((p.g_value(u) - g0).norm() > 1e-9) return false;
  return true;
}

}  // namespace certify_detail

namespace certify_detail {

/// K-side tangent objects at g(x); in level-set mode the all-space upper set unless g is constant on S.
inline Region k_tangent(const ProblemInstance& p, const Vec& x, Level level) {
  if (level == Level::level_set && !g_constant_on_S(p)) return Region::all_space(p.m).note(kUpperSet);
  return tangent_cone(p.K, p.g_value(x));
}

inline Region k_second(const ProblemInstance& p, const Vec& x, const Vec& u, SecondOrderKind kind, Level level) {
  if (level == Level::level_set && !g_constant_on_S(p)) return Region::all_space(p.m).note(kUpperSet);
  return second_tangent(p.K, p.g_value(x), u, kind);
}

inline void add_row_once(std::vector<Vec>& rows, const Vec& a) {
  if (a.norm() <= 1e-12) return;
  const Vec u = a.normalized();
  for (const auto& r : rows)
    if ((r - u).norm() <= 1e-9) return;
  rows.push_back(u);
}

/// Distinct normalized gradients of f over boundary points of S near xbar.
inline std::vector<Vec> boundary_gradients(const ProblemInstance& p) {
  std::vector<Vec> rows;
  for (const Vec& u : points_of_S(p, 0.1 * p.options.delta, 1000, true)) add_row_once(rows, p.f.gradient(u));
  return rows;
}

}  // namespace certify_detail

/// {d : grad g(x) d in T_K(g(x)), grad f(x) d <= 0}, or the level-set version C_S at xbar.
inline Region critical_cone(const ProblemInstance& p, const Vec& x, Level level = Level::point) {
  using namespace certify_detail;
  require_feasible(p, x);
  const Mat j = p.g_jet(x).jacobian;
  Region t = affine_preimage(k_tangent(p, x, level), j, Vec::Zero(p.m));
  t.cone = true;
  if (level == Level::point) {
    Region out = with_ineq(t, p.f.gradient(x), 0.0);
    out.cone = true;
    return out;
  }
  for (const Vec& a : boundary_gradients(p)) t = with_ineq(t, a, 0.0);
  t.cone = true;
  return t;
}

/// Lambda(x;d) (limiting) or Lambda^c(x;d) (Clarke) as a region in multiplier space.
inline Region directional_multipliers(const ProblemInstance& p, const Vec& x, const Vec& d, DirectionalKind kind) {
  certify_detail::require_feasible(p, x);
  const Jet2 gj = p.g_jet(x);
  const Region nk = directional_normal(p.K, p.g_value(x), gj.jacobian * d, kind);
  Region out = intersect(multiplier_affine_set(p, x).region(), nk);
  out.cone = false;
  out.notes = nk.notes;
  return pruned(out);
}

enum class CqKind { foscms, soscms, dirrcq, nondeg };

inline const char* to_string(CqKind k) {
  switch (k) {
    case CqKind::foscms: return "FOSCMS";
    case CqKind::soscms: return "SOSCMS";
    case CqKind::dirrcq: return "DirRCQ";
    case CqKind::nondeg: return "NONDEG";
  }
  return "?";
}

struct CqResult {
  CqKind kind = CqKind::foscms;
  bool holds = false;
  /// A nonzero multiplier breaking the implication when the check fails.
  Vec witness;
  std::vector<std::string> notes;
};

namespace certify_detail {

/// A nonzero member of the cone inside the unit box, or nothing when the cone is {0}.
inline std::optional<Vec> cone_witness(const Region& r) {
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
        if (out.status == LpStatus::optimal && out.value.value() > 1e-9) return out.witness;
      }
  }
  return std::nullopt;
}

/// Columns spanning the linear hull of a union of cones.
inline Mat span_generators(const Region& r) {
  std::vector<Vec> cols;
  for (const auto& c : r.cells) {
    const Generators g = generators_of(c);
    for (const auto& v : g.rays) cols.push_back(v);
    for (const auto& v : g.lines) cols.push_back(v);
  }
  Mat out(r.dim, static_cast<long>(cols.size()));
  for (size_t j = 0; j < cols.size(); ++j) out.col(static_cast<long>(j)) = cols[j];
  return out;
}

}  // namespace certify_detail

inline CqResult constraint_qualification_check(const ProblemInstance& p, const Vec& x, const Vec& d, CqKind kind) {
  using namespace certify_detail;
  require_feasible(p, x);
  require_dim(d.size(), p.n, "direction");
  if (kind == CqKind::soscms && !is_polyhedral(p.K)) throw DomainError("SOSCMS requires a polyhedral-union K");
  const Jet2 gj = p.g_jet(x);
  const Vec y = p.g_value(x);
  const Vec u = gj.jacobian * d;
  CqResult out;
  out.kind = kind;
  const auto dk = kind == CqKind::dirrcq ? DirectionalKind::clarke : DirectionalKind::limiting;
  const Region nk = directional_normal(p.K, y, u, dk);
  out.notes = nk.notes;
  if (kind == CqKind::nondeg) {
    const Mat b = span_generators(nk);
    if (b.cols() == 0) {
      out.holds = true;
      return out;
    }
    const Mat jtb = gj.jacobian.transpose() * b;
    const Mat ker = linalg::nullspace(jtb);
    out.holds = true;
    for (long j = 0; j < ker.cols(); ++j) {
      const Vec lam = b * ker.col(j);
      if (lam.norm() > 1e-9) {
        out.holds = false;
        out.witness = lam / lam.norm();
        break;
      }
    }
    return out;
  }
  Region cone = nk;
  for (auto& c : cone.cells)
    for (long i = 0; i < p.n; ++i) c.add_eq(gj.jacobian.col(i), 0.0);
  if (kind == CqKind::soscms) {
    // d^T grad^2 (lam^T g) d >= 0, linear in lam
    Vec q(p.m);
    for (long i = 0; i < p.m; ++i) q(i) = d.dot(gj.hessians[static_cast<size_t>(i)] * d);
    for (auto& c : cone.cells) c.add_ineq(-q, 0.0);
  }
  cone.cone = true;
  const auto w = cone_witness(cone);
  out.holds = !w.has_value();
  if (w) out.witness = *w;
  return out;
}

/// Name of the first sufficient condition for MSCQ in direction d that holds, if any.
inline std::optional<std::string> mscq_certificate(const ProblemInstance& p, const Vec& x, const Vec& d) {
  if (p.g_affine() && is_polyhedral(p.K)) return std::string("affine-polyhedral");
  if (constraint_qualification_check(p, x, d, CqKind::foscms).holds) return std::string("FOSCMS");
  if (is_polyhedral(p.K) && constraint_qualification_check(p, x, d, CqKind::soscms).holds) return std::string("SOSCMS");
  // the directional neighborhood lies inside the feasible set, so the subregularity estimate is trivial
  const auto est = mscq_modulus_estimate(p, x, d, p.options.rho, p.options.delta, 2000, p.options.seed);
  if (est.infeasible_samples == 0) return std::string("sampled-feasible-neighborhood");
  return std::nullopt;
}

/// Linearized tangent objects of the feasible set: exact when MSCQ is certified in direction d, otherwise
/// upper sets flagged "inclusion-only". Level-set mode uses the K-side objects relative to g(S).
inline Region linearized_phi_tangents(const ProblemInstance& p, const Vec& x, const Vec& d, OracleKind kind,
                                      Level level = Level::point) {
  using namespace certify_detail;
  require_feasible(p, x);
  require_dim(d.size(), p.n, "direction");
  const Jet2 gj = p.g_jet(x);
  Region out;
  switch (kind) {
    case OracleKind::tangent:
      out = affine_preimage(k_tangent(p, x, level), gj.jacobian, Vec::Zero(p.m));
      out.cone = true;
      break;
    case OracleKind::outer2:
      out = affine_preimage(k_second(p, x, gj.jacobian * d, SecondOrderKind::outer, level), gj.jacobian,
                            gj.second(d));
      break;
    case OracleKind::asymp2:
      out = affine_preimage(k_second(p, x, gj.jacobian * d, SecondOrderKind::asymptotic, level), gj.jacobian,
                            Vec::Zero(p.m));
      out.cone = true;
      break;
  }
  out = pruned(out);
  if (level == Level::level_set || !mscq_certificate(p, x, d)) out.note(kInclusionOnly);
  return out;
}

/// Unit directions of a polyhedral cone: an equi-angular (2-D), Fibonacci (3-D) or seeded (higher) mesh of the
/// unit sphere of each cell's linear hull, filtered by exact membership.
inline std::vector<Vec> direction_mesh(const Region& cone, unsigned long long seed) {
  std::vector<Vec> out;
  for (const auto& cell : cone.cells) {
    const Mat span = certify_detail::span_generators(Region::from_cell(cell, true));
    const Mat b = linalg::rowspace(span.transpose());
    const long k = b.cols();
    for (long j = 0; j < span.cols(); ++j)
      if (span.col(j).norm() > 0 && cell_contains(cell, span.col(j).normalized())) out.push_back(span.col(j).normalized());
    std::vector<Vec> local;
    if (k == 1) {
      local = {Vec::Constant(1, 1.0), Vec::Constant(1, -1.0)};
    } else if (k == 2) {
      for (int i = 0; i < 720; ++i) {
        const double a = 2.0 * std::numbers::pi * i / 720.0;
        Vec v(2);
        v << std::cos(a), std::sin(a);
        local.push_back(v);
      }
    } else if (k == 3) {
      const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
      for (int i = 0; i < 2000; ++i) {
        const double z = 1.0 - 2.0 * (i + 0.5) / 2000.0;
        const double r = std::sqrt(1.0 - z * z);
        Vec v(3);
        v << r * std::cos(golden * i), r * std::sin(golden * i), z;
        local.push_back(v);
      }
    } else if (k > 3) {
      std::mt19937_64 rng(seed);
      std::normal_distribution<double> nd;
      for (int i = 0; i < 10000; ++i) {
        Vec v(k);
        for (long j = 0; j < k; ++j) v(j) = nd(rng);
        local.push_back(v.normalized());
      }
    }
    for (const auto& v : local) {
      const Vec dvec = b * v;
      if (cell_contains(cell, dvec)) out.push_back(dvec);
    }
  }
  std::vector<Vec> unique;
  for (const auto& v : out) {
    bool dup = false;
    for (const auto& u : unique) dup |= (u - v).norm() <= 1e-9;
    if (!dup) unique.push_back(v);
  }
  return unique;
}

}  // namespace sharpcheck
