#pragma once

#include "sharpcheck/sufficient.hpp"

namespace sharpcheck {

/// Recomputes the achieved value of a witness from (x, d, lam, w) alone.
inline double replay_witness(const ProblemInstance& p, const Witness& w) {
  using namespace certify_detail;
  const std::string& k = w.inequality;
  if (k == "growth") {
    if (w.x.size() == 0) return std::numeric_limits<double>::infinity();
    const double dist = dist_to_S(p, w.x);
    return (p.f.value(w.x) - p.f.value(p.xbar)) / (dist * dist);
  }
  if (k == "isolated-first-order")
    return infimum(linearized_phi_tangents(p, w.x, Vec::Zero(p.n), OracleKind::tangent), p.f.gradient(w.x)).value();
  if (k == "isolated-multiplier") return 0.0;
  const Jet2 gj = p.g_jet(w.x);
  const Vec y = p.g_value(w.x), u = gj.jacobian * w.d, gdd = gj.second(w.d);
  const double q = lagrangian_jet(p, w.x, w.lam).quadform(w.d);
  if (k == "implicit-i")
    return adjoint_support(linearized_phi_tangents(p, w.x, w.d, OracleKind::asymp2), gj.jacobian, w.lam, Vec::Zero(p.m));
  if (k == "implicit-ii")
    return q - adjoint_support(linearized_phi_tangents(p, w.x, w.d, OracleKind::outer2), gj.jacobian, w.lam, gdd);
  if (k == "sufficient-i" || k == "sufficient-ii-region" || k == "sufficient-ii-k") {
    const auto sd = sufficient_direction(p, w.d, w.level_set ? Level::level_set : Level::point);
    if (k == "sufficient-i") return boxed_adjoint_support(sd.asym, gj.jacobian, w.lam);
    if (k == "sufficient-ii-region") return q - adjoint_support(sd.outer, gj.jacobian, w.lam, gdd);
    return q - support(sd.k_outer, w.lam).value();
  }
  const Region tpp = second_tangent(p.K, y, u, SecondOrderKind::asymptotic);
  const Region t2 = second_tangent(p.K, y, u, SecondOrderKind::outer);
  if (k == "explicit-i") return lower_gen_support(tpp, w.lam).value();
  if (k == "explicit-ii") return q - lower_gen_support(t2, w.lam).value();
  if (k == "clarke-i") return -w.lam.dot(w.w);
  if (k == "clarke-ii") return w.d.dot(p.f.hessian(w.x) * w.d) + w.lam.dot(gdd - w.w);
  if (k == "clarke-convex-i") return support_cell(tpp.cells.at(static_cast<size_t>(w.element)), w.lam).value();
  if (k == "clarke-convex-ii") return q - support_cell(t2.cells.at(static_cast<size_t>(w.element)), w.lam).value();
  if (k == "nondegenerate-i") return support(tpp, w.lam).value();
  if (k == "nondegenerate-ii") return q - support(t2, w.lam).value();
  throw InputError("unknown witness inequality '" + k + "'");
}

/// Whether every witness replays within 1e-7 (relative for large magnitudes; infinities must match exactly).
inline bool witnesses_replay(const ProblemInstance& p, const CertificationReport& r) {
  for (const auto& w : r.witnesses) {
    const double v = replay_witness(p, w);
    if (std::isinf(v) || std::isinf(w.achieved)) {
      if (v != w.achieved) return false;
      continue;
    }
    if (std::abs(v - w.achieved) > 1e-7 * std::max(1.0, std::abs(v))) return false;
  }
  return true;
}

}  // namespace sharpcheck
