#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "sharpcheck/certificate.hpp"

namespace sharpcheck {

enum class NecessaryMode { proximal, tangent_distance };

inline const char* to_string(NecessaryMode m) { return m == NecessaryMode::proximal ? "proximal" : "tangent-distance"; }

namespace certify_detail {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline std::string vec_text(const Vec& v) {
  std::ostringstream os;
  os << "(";
  for (long i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v(i);
  os << ")";
  return os.str();
}

/// Why (x, d) is outside the admissible directions of the condition, or nothing.
inline std::optional<std::string> necessary_precondition(const ProblemInstance& p, const Vec& x, const Vec& d,
                                                         double eps, NecessaryMode mode) {
  require_dim(x.size(), p.n, "point");
  require_dim(d.size(), p.n, "direction");
  if (!p.feasible(x)) return "x is infeasible";
  if (!membership(p.S, x)) return "x is not in S";
  if ((x - p.xbar).norm() >= p.options.delta) return "x is outside B_delta(xbar)";
  if (!region_contains(critical_cone(p, x), d, variational_detail::dir_tol(d))) return "d is not a critical direction";
  if (mode == NecessaryMode::proximal && !eps_proximal_membership(p.S, x, d, eps))
    return "d is not an eps-proximal normal to S at x";
  return std::nullopt;
}

/// Right-hand-side scale: (1 - 2 eps)^2 |d|^2 or dist(d, T_S(x))^2.
inline double necessary_scale(const ProblemInstance& p, const Vec& x, const Vec& d, double eps, NecessaryMode mode) {
  if (mode == NecessaryMode::proximal) return std::pow(1.0 - 2.0 * eps, 2) * d.squaredNorm();
  return std::pow(distance_to_region(tangent_cone(p.S, x), d), 2);
}

inline double kappa_from(double value, double scale) {
  if (std::isinf(value)) return value;
  if (scale <= 0.0) return value >= -1e-12 ? kInf : -kInf;
  return value / (2.0 * scale);
}

inline CertificationReport precondition_report(std::string check, const std::string& why) {
  CertificationReport r;
  r.check = std::move(check);
  r.verdict = Verdict::hypotheses_not_met;
  r.diag("precondition: " + why);
  return r;
}

}  // namespace certify_detail

/// Conditions (i) sigma_Theta(lam) <= 0 and (ii) quadform - sigma_Omega(lam) >= 2 kappa scale for every multiplier,
/// evaluated at lam0 and lam0 +- each nullspace direction.
inline CertificationReport necessary_implicit_check(const ProblemInstance& p, const Vec& x, const Vec& d, double eps,
                                                    NecessaryMode mode) {
  using namespace certify_detail;
  const std::string name = std::string("necessary-implicit/") + to_string(mode);
  if (auto why = necessary_precondition(p, x, d, eps, mode)) return precondition_report(name, *why);
  CertificationReport rep;
  rep.check = name;
  const double scale = necessary_scale(p, x, d, eps, mode);
  const double kmin = p.options.kappa_grid.front();
  const Jet2 gj = p.g_jet(x);
  const Region tpp = linearized_phi_tangents(p, x, d, OracleKind::asymp2);
  const Region t2 = linearized_phi_tangents(p, x, d, OracleKind::outer2);
  const bool upper = tpp.has_note(kInclusionOnly) || t2.has_note(kInclusionOnly);
  CqStatus cq;
  cq.d = d;
  cq.certificate = mscq_certificate(p, x, d).value_or("");
  rep.cq_status.push_back(cq);
  if (upper) rep.diag("linearized tangent sets are upper sets (MSCQ not certified); violations are not conclusive");
  const auto ma = multiplier_affine_set(p, x);
  if (ma.empty) {
    rep.verdict = Verdict::satisfied;
    rep.kappa_bound = kInf;
    rep.diag("multiplier affine set is empty; conditions hold vacuously");
    return rep;
  }
  bool violated = false;
  double kappa = kInf;
  for (const Vec& lam : affine_extremes(ma)) {
    Witness wi{"implicit-i", x, d, lam, Vec(), adjoint_support(tpp, gj.jacobian, lam, Vec::Zero(p.m)), 0.0, true};
    wi.passed = wi.achieved <= 1e-9;
    const double q = lagrangian_jet(p, x, lam).quadform(d);
    const double s = adjoint_support(t2, gj.jacobian, lam, gj.second(d));
    Witness wii{"implicit-ii", x, d, lam, Vec(), q - s, 2.0 * kmin * scale, true};
    wii.passed = wii.achieved >= wii.threshold - 1e-12;
    violated |= !wi.passed || !wii.passed;
    kappa = std::min(kappa, kappa_from(wii.achieved, scale));
    rep.witnesses.push_back(wi);
    rep.witnesses.push_back(wii);
    if (ma.basis.cols() == 0) break;
  }
  if (violated) {
    rep.verdict = upper ? Verdict::inconclusive : Verdict::violated;
    std::stable_partition(rep.witnesses.begin(), rep.witnesses.end(), [](const Witness& w) { return !w.passed; });
  } else {
    rep.verdict = Verdict::satisfied;
    rep.kappa_bound = kappa;
  }
  return rep;
}

namespace certify_detail {

/// Multiplier candidates inside a cell of a multiplier region: its vertices (or a point), moved along its rays and
/// lines by steps of 0.25 up to length one.
inline std::vector<Vec> cell_candidates(const PolyCell& c) {
  std::vector<Vec> out;
  if (cell_is_empty(c)) return out;
  const Generators g = generators_of(c);
  std::vector<Vec> bases = g.vertices;
  if (bases.empty()) bases.push_back(*cell_point(c));
  std::vector<Vec> dirs;
  for (const auto& r : g.rays) dirs.push_back(r.normalized());
  for (const auto& l : g.lines) {
    dirs.push_back(l.normalized());
    dirs.push_back(-l.normalized());
  }
  for (const auto& b : bases) {
    out.push_back(b);
    for (const auto& dv : dirs)
      for (double t : {0.25, 0.5, 0.75, 1.0}) out.push_back(b + t * dv);
  }
  for (size_t i = 0; i + 1 < bases.size(); ++i) out.push_back(0.5 * (bases[i] + bases[i + 1]));
  return out;
}

inline double lower_support_value(const Region& s, const Vec& lam) { return lower_gen_support(s, lam).value(); }

}  // namespace certify_detail

/// M-multiplier search: some lam in Lambda(x;d) with lower support over T''_K at most 0, and (when T^2_K is
/// nonempty) some lam maximizing quadform - lower support over T^2_K. The search window is the unit step
/// neighborhood of each cell's vertices, so kappa_bound is window-relative when the multiplier set is unbounded.
inline CertificationReport necessary_explicit_check(const ProblemInstance& p, const Vec& x, const Vec& d, double eps) {
  using namespace certify_detail;
  const std::string name = "necessary-explicit";
  if (auto why = necessary_precondition(p, x, d, eps, NecessaryMode::proximal)) return precondition_report(name, *why);
  CqStatus cq;
  cq.d = d;
  cq.certificate = mscq_certificate(p, x, d).value_or("");
  if (cq.certificate.empty()) {
    auto r = precondition_report(name, "no condition certifies MSCQ in direction " + vec_text(d));
    r.cq_status.push_back(cq);
    return r;
  }
  CertificationReport rep;
  rep.check = name;
  rep.cq_status.push_back(cq);
  const double scale = necessary_scale(p, x, d, eps, NecessaryMode::proximal);
  const double kmin = p.options.kappa_grid.front();
  const Jet2 gj = p.g_jet(x);
  const Vec y = p.g_value(x), u = gj.jacobian * d;
  const Region mult = directional_multipliers(p, x, d, DirectionalKind::limiting);
  if (region_is_empty(mult)) {
    rep.verdict = Verdict::violated;
    rep.diag("the directional M-multiplier set is empty");
    return rep;
  }
  const Region tpp = second_tangent(p.K, y, u, SecondOrderKind::asymptotic);
  const Region t2 = second_tangent(p.K, y, u, SecondOrderKind::outer);
  std::vector<Vec> cands;
  for (const auto& c : mult.cells)
    for (auto& v : cell_candidates(c)) cands.push_back(std::move(v));
  std::optional<Witness> best_i, best_ii;
  for (const Vec& lam : cands) {
    const double si = lower_support_value(tpp, lam);
    if (!best_i || si < best_i->achieved) best_i = Witness{"explicit-i", x, d, lam, Vec(), si, 0.0, si <= 1e-9};
    if (region_is_empty(t2)) continue;
    const double val = lagrangian_jet(p, x, lam).quadform(d) - lower_support_value(t2, lam);
    if (!best_ii || val > best_ii->achieved + 1e-12)
      best_ii = Witness{"explicit-ii", x, d, lam, Vec(), val, 2.0 * kmin * scale, val >= 2.0 * kmin * scale - 1e-12};
  }
  rep.witnesses.push_back(*best_i);
  if (best_ii) rep.witnesses.push_back(*best_ii);
  const bool ok = best_i->passed && (!best_ii || best_ii->passed);
  rep.verdict = ok ? Verdict::satisfied : Verdict::violated;
  if (ok) rep.kappa_bound = best_ii ? kappa_from(best_ii->achieved, scale) : kInf;
  if (!best_ii) rep.diag("T^2_K is empty; condition (ii) is vacuous");
  bool unbounded = false;
  for (const auto& c : mult.cells) unbounded |= !generators_of(c).rays.empty() || !generators_of(c).lines.empty();
  if (unbounded) rep.diag("multiplier set is unbounded; kappa bound is relative to the unit search window");
  if (ok) {
    const auto implicit = necessary_implicit_check(p, x, d, eps, NecessaryMode::proximal);
    if (implicit.verdict == Verdict::violated) {
      rep.strength_gap = true;
      rep.diag("strength gap: the implicit check rejects this point while the explicit condition holds");
    }
  }
  return rep;
}

enum class ClarkeMode { elementwise, convex_subset, nondegenerate };

inline const char* to_string(ClarkeMode m) {
  switch (m) {
    case ClarkeMode::elementwise: return "elementwise";
    case ClarkeMode::convex_subset: return "convex-subset";
    case ClarkeMode::nondegenerate: return "nondegenerate";
  }
  return "?";
}

namespace certify_detail {

/// Elements of a K-side set: vertices, vertex + ray and vertex +- line for each cell; nonzero rays and lines
/// alone when the set is a cone.
inline std::vector<Vec> region_elements(const Region& r) {
  std::vector<Vec> out;
  for (const auto& c : r.cells) {
    if (cell_is_empty(c)) continue;
    const Generators g = generators_of(c);
    std::vector<Vec> dirs = g.rays;
    for (const auto& l : g.lines) {
      dirs.push_back(l);
      dirs.push_back(-l);
    }
    if (r.cone) {
      for (const auto& v : dirs) out.push_back(v.normalized());
      continue;
    }
    for (const auto& v : g.vertices) {
      out.push_back(v);
      for (const auto& dv : dirs) out.push_back(v + dv.normalized());
    }
  }
  return out;
}

/// max over the cell of objective . lam + constant.
inline ExtendedReal maximize_affine(const PolyCell& c, const Vec& objective, double constant) {
  const auto o = maximize_over_cell(c, objective);
  if (o.status != LpStatus::optimal) return o.value;
  return ExtendedReal::finite(o.value.value() + constant);
}

/// min over u of grad f . u + constant subject to grad g u + shift in the convex cone C (one cell).
inline ExtendedReal primal_conic(const Mat& j, const Vec& grad_f, const Vec& shift, const Region& cone,
                                 double constant) {
  ExtendedReal best = ExtendedReal::pos_inf();
  for (const auto& c : cone.cells) {
    LinearProgram lp;
    lp.objective = -grad_f;
    for (const auto& r : c.ineq) lp.ineq.push_back({j.transpose() * r.normal, r.offset - r.normal.dot(shift)});
    for (const auto& r : c.eq) lp.eq.push_back({j.transpose() * r.normal, r.offset - r.normal.dot(shift)});
    const auto o = solve_lp(lp);
    if (o.status == LpStatus::infeasible) continue;
    const ExtendedReal v = -o.value + ExtendedReal::finite(constant);
    best = std::min(best, v);
  }
  return best;
}

/// min over lam in the multiplier cell of sigma_C(lam) + lam . shift + constant for a nonempty cell C, by the
/// dual description sigma_C(lam) = min { b.y + e.z : A^T y + E^T z = lam, y >= 0 }; `sign` = -1 maximizes
/// constant + lam . shift - sigma_C(lam) instead.
inline std::pair<ExtendedReal, Vec> support_program(const PolyCell& mult, const PolyCell& c, const Vec& shift,
                                                    double constant, double sign) {
  const long m = mult.dim, a = static_cast<long>(c.ineq.size()), e = static_cast<long>(c.eq.size());
  const long w = m + a + e;
  LinearProgram lp;
  lp.objective = Vec::Zero(w);
  lp.objective.head(m) = -sign * shift;
  for (long i = 0; i < a; ++i) lp.objective(m + i) = -c.ineq[static_cast<size_t>(i)].offset;
  for (long i = 0; i < e; ++i) lp.objective(m + a + i) = -c.eq[static_cast<size_t>(i)].offset;
  for (long k = 0; k < m; ++k) {
    Vec row = Vec::Zero(w);
    row(k) = -1.0;
    for (long i = 0; i < a; ++i) row(m + i) = c.ineq[static_cast<size_t>(i)].normal(k);
    for (long i = 0; i < e; ++i) row(m + a + i) = c.eq[static_cast<size_t>(i)].normal(k);
    lp.eq.push_back({row, 0.0});
  }
  for (long i = 0; i < a; ++i) lp.ineq.push_back({-linalg::unit(w, m + i), 0.0});
  auto lift = [&](const LinRow& r) {
    Vec row = Vec::Zero(w);
    row.head(m) = r.normal;
    return LinRow{row, r.offset};
  };
  for (const auto& r : mult.ineq) lp.ineq.push_back(lift(r));
  for (const auto& r : mult.eq) lp.eq.push_back(lift(r));
  const auto o = solve_lp(lp);
  // maximized -(sign lam.shift + sigma); value = sign * (-max) + constant in the requested orientation
  if (o.status == LpStatus::infeasible) return {sign > 0 ? ExtendedReal::pos_inf() : ExtendedReal::neg_inf(), Vec()};
  if (o.status == LpStatus::unbounded) return {sign > 0 ? ExtendedReal::neg_inf() : ExtendedReal::pos_inf(), Vec()};
  const double val = sign > 0 ? -o.value.value() + constant : o.value.value() + constant;
  return {ExtendedReal::finite(val), o.witness.head(m)};
}

}  // namespace certify_detail

/// Clarke-multiplier conditions: per element (dual LP over Lambda^c with the primal conic LP as a duality check),
/// per convex cell of the K-side sets (support-function form), or at the unique multiplier under nondegeneracy.
inline CertificationReport necessary_clarke_check(const ProblemInstance& p, const Vec& x, const Vec& d, double eps,
                                                  ClarkeMode mode) {
  using namespace certify_detail;
  const std::string name = std::string("necessary-clarke/") + to_string(mode);
  if (auto why = necessary_precondition(p, x, d, eps, NecessaryMode::proximal)) return precondition_report(name, *why);
  const CqKind needed = mode == ClarkeMode::nondegenerate ? CqKind::nondeg : CqKind::dirrcq;
  const CqResult cqr = constraint_qualification_check(p, x, d, needed);
  CqStatus cq;
  cq.d = d;
  cq.checks.push_back(cqr);
  if (cqr.holds) cq.certificate = to_string(needed);
  if (!cqr.holds) {
    auto r = precondition_report(name, std::string(to_string(needed)) + " fails in direction " + vec_text(d));
    r.cq_status.push_back(cq);
    return r;
  }
  CertificationReport rep;
  rep.check = name;
  rep.cq_status.push_back(cq);
  const double scale = necessary_scale(p, x, d, eps, NecessaryMode::proximal);
  const double kmin = p.options.kappa_grid.front();
  const Jet2 gj = p.g_jet(x);
  const Vec y = p.g_value(x), u = gj.jacobian * d, gdd = gj.second(d);
  const double fdd = d.dot(p.f.hessian(x) * d);
  const Vec gf = p.f.gradient(x);
  const Region mult = directional_multipliers(p, x, d, DirectionalKind::clarke);
  if (region_is_empty(mult)) {
    rep.verdict = Verdict::violated;
    rep.diag("the directional C-multiplier set is empty");
    return rep;
  }
  const Region tpp = second_tangent(p.K, y, u, SecondOrderKind::asymptotic);
  const Region t2 = second_tangent(p.K, y, u, SecondOrderKind::outer);
  bool ok = true;
  double kappa = kInf;
  auto record_ii = [&](Witness w) {
    w.threshold = 2.0 * kmin * scale;
    w.passed = w.achieved >= w.threshold - 1e-12;
    ok &= w.passed;
    kappa = std::min(kappa, kappa_from(w.achieved, scale));
    rep.witnesses.push_back(std::move(w));
  };
  if (mode == ClarkeMode::elementwise) {
    const Region that = directional_clarke_tangent(p.K, y, u);
    const PolyCell& mc = mult.cells.front();
    for (const Vec& v : region_elements(tpp)) {
      const auto o = maximize_over_cell(mc, -v);
      if (o.status != LpStatus::optimal) {
        rep.diag("dual LP for element " + vec_text(v) + " is " + to_string(o.status));
        if (o.status == LpStatus::unbounded) rep.diag("modeling error: unbounded dual multiplier LP");
        continue;
      }
      Witness w{"clarke-i", x, d, o.witness, v, o.value.value(), 0.0, o.value.value() >= -1e-9};
      ok &= w.passed;
      rep.witnesses.push_back(w);
      const ExtendedReal pr = primal_conic(gj.jacobian, gf, -v, that, 0.0);
      rep.duality.push_back({"T''_K element " + vec_text(v), pr.value(), o.value.value()});
    }
    if (!region_is_empty(t2)) {
      for (const Vec& w2 : region_elements(t2)) {
        const Vec c = gdd - w2;
        const auto o = maximize_over_cell(mc, c);
        if (o.status != LpStatus::optimal) {
          rep.diag("dual LP for element " + vec_text(w2) + " is " + to_string(o.status));
          continue;
        }
        record_ii(Witness{"clarke-ii", x, d, o.witness, w2, o.value.value() + fdd, 0.0, true});
        const ExtendedReal pr = primal_conic(gj.jacobian, gf, c, that, fdd);
        rep.duality.push_back({"T^2_K element " + vec_text(w2), pr.value(), o.value.value() + fdd});
      }
    }
    for (const auto& rec : rep.duality)
      if (!(std::abs(rec.primal - rec.dual) <= 1e-6)) rep.diag("duality gap at " + rec.element);
  } else if (mode == ClarkeMode::convex_subset) {
    const PolyCell& mc = mult.cells.front();
    for (size_t k = 0; k < tpp.cells.size(); ++k) {
      if (cell_is_empty(tpp.cells[k])) continue;
      const auto [val, lam] = support_program(mc, tpp.cells[k], Vec::Zero(p.m), 0.0, 1.0);
      Witness w{"clarke-convex-i", x, d, lam, Vec(), val.value(), 0.0, val.value() <= 1e-9};
      w.element = static_cast<long>(k);
      ok &= w.passed;
      rep.witnesses.push_back(w);
    }
    for (size_t k = 0; k < t2.cells.size(); ++k) {
      if (cell_is_empty(t2.cells[k])) continue;
      const auto [val, lam] = support_program(mc, t2.cells[k], gdd, fdd, -1.0);
      Witness w{"clarke-convex-ii", x, d, lam, Vec(), val.value(), 0.0, true};
      w.element = static_cast<long>(k);
      record_ii(w);
    }
  } else {
    const PolyCell& mc = mult.cells.front();
    if (cell_dimension(mc) != 0) rep.diag("multiplier set is not a singleton despite nondegeneracy");
    const Vec lam0 = *cell_point(mc);
    const double si = support(tpp, lam0).value();
    Witness w{"nondegenerate-i", x, d, lam0, Vec(), si, 0.0, std::abs(si) <= 1e-9};
    ok &= w.passed;
    rep.witnesses.push_back(w);
    if (!region_is_empty(t2))
      record_ii(Witness{"nondegenerate-ii", x, d, lam0, Vec(),
                        lagrangian_jet(p, x, lam0).quadform(d) - support(t2, lam0).value(), 0.0, true});
  }
  rep.verdict = ok ? Verdict::satisfied : Verdict::violated;
  if (ok) rep.kappa_bound = kappa;
  return rep;
}

enum class SweepChecker { implicit, explicit_m, clarke, nondegenerate };

inline const char* to_string(SweepChecker c) {
  switch (c) {
    case SweepChecker::implicit: return "implicit";
    case SweepChecker::explicit_m: return "explicit";
    case SweepChecker::clarke: return "clarke";
    case SweepChecker::nondegenerate: return "nondegenerate";
  }
  return "?";
}

namespace certify_detail {

/// Unit critical directions at x admitted by the quantifier: C(x) ∩ N^{P,eps}_S(x) in proximal mode, C(x) otherwise;
/// thinned to at most `cap` directions.
inline std::vector<Vec> quantifier_directions(const ProblemInstance& p, const Vec& x, double eps, NecessaryMode mode,
                                              size_t cap) {
  const Region c = critical_cone(p, x);
  std::vector<Vec> dirs;
  if (mode == NecessaryMode::tangent_distance) {
    dirs = direction_mesh(c, p.options.seed);
  } else {
    Region core = intersect(c, normal_cone(p.S, x, NormalKind::proximal));
    core.cone = true;
    dirs = direction_mesh(core, p.options.seed);
    if (eps > 0.0)
      for (const Vec& v : direction_mesh(c, p.options.seed))
        if (eps_proximal_membership(p.S, x, v, eps)) dirs.push_back(v);
  }
  if (dirs.size() <= cap) return dirs;
  std::vector<Vec> out;
  const double stride = static_cast<double>(dirs.size()) / static_cast<double>(cap);
  for (size_t k = 0; k < cap; ++k) out.push_back(dirs[static_cast<size_t>(k * stride)]);
  return out;
}

}  // namespace certify_detail

/// Runs the per-point checker over sampled x in S ∩ B_delta(xbar) and their admissible directions; violated if any
/// pair is violated, kappa_bound the minimum over the sweep.
inline CertificationReport sweep_necessary(const ProblemInstance& p, double eps, NecessaryMode mode,
                                           SweepChecker checker = SweepChecker::implicit, long points = 12,
                                           size_t directions_per_point = 72) {
  using namespace certify_detail;
  CertificationReport rep;
  rep.check = std::string("sweep/") + to_string(checker) + "/" + to_string(mode);
  std::vector<Vec> xs{p.xbar};
  for (const Vec& u : points_of_S(p, 0.9 * p.options.delta, points, false)) {
    bool dup = false;
    for (const auto& v : xs) dup |= (u - v).norm() <= 1e-9;
    if (!dup) xs.push_back(u);
  }
  std::vector<std::vector<CertificationReport>> per(xs.size());
  parallel_for(static_cast<long>(xs.size()), [&](long i) {
    const Vec& x = xs[static_cast<size_t>(i)];
    if (!p.feasible(x)) return;
    for (const Vec& d : quantifier_directions(p, x, eps, mode, directions_per_point)) {
      switch (checker) {
        case SweepChecker::implicit: per[static_cast<size_t>(i)].push_back(necessary_implicit_check(p, x, d, eps, mode)); break;
        case SweepChecker::explicit_m: per[static_cast<size_t>(i)].push_back(necessary_explicit_check(p, x, d, eps)); break;
        case SweepChecker::clarke:
          per[static_cast<size_t>(i)].push_back(necessary_clarke_check(p, x, d, eps, ClarkeMode::elementwise));
          break;
        case SweepChecker::nondegenerate:
          per[static_cast<size_t>(i)].push_back(necessary_clarke_check(p, x, d, eps, ClarkeMode::nondegenerate));
          break;
      }
    }
  });
  long evaluated = 0, skipped = 0, inconclusive = 0;
  bool violated = false;
  double kappa = kInf;
  const CertificationReport* binding = nullptr;
  for (const auto& list : per)
    for (const auto& r : list) {
      if (r.verdict == Verdict::hypotheses_not_met) {
        ++skipped;
        continue;
      }
      ++evaluated;
      rep.strength_gap = rep.strength_gap || r.strength_gap;
      if (r.verdict == Verdict::inconclusive) ++inconclusive;
      if (r.verdict == Verdict::violated && !violated) {
        violated = true;
        binding = &r;
      }
      if (r.verdict == Verdict::satisfied && r.kappa_bound && *r.kappa_bound < kappa) {
        kappa = *r.kappa_bound;
        if (!violated) binding = &r;
      }
    }
  std::ostringstream os;
  os << xs.size() << " points, " << evaluated << " evaluated directions, " << skipped << " outside the quantifier, "
     << inconclusive << " inconclusive";
  rep.diag(os.str());
  if (binding) {
    rep.witnesses = binding->witnesses;
    rep.cq_status = binding->cq_status;
  }
  if (violated) {
    rep.verdict = Verdict::violated;
  } else if (evaluated == 0) {
    rep.verdict = Verdict::satisfied;
    rep.kappa_bound = kInf;
    rep.diag("no admissible direction at any sampled point; satisfied vacuously");
  } else if (inconclusive > 0 && kappa == kInf) {
    rep.verdict = Verdict::inconclusive;
  } else {
    rep.verdict = Verdict::satisfied;
    rep.kappa_bound = kappa;
  }
  return rep;
}

}  // namespace sharpcheck
