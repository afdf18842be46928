#pragma once

#include <sstream>

#include "sharpcheck/necessary.hpp"

namespace sharpcheck {

enum class SufficientMode { region_side, k_side };

inline const char* to_string(SufficientMode m) { return m == SufficientMode::region_side ? "region-side" : "k-side"; }

struct SufficientOptions {
  /// Compare against kappa |d|^2 instead of the corrected 2 kappa |d|^2.
  bool literal_threshold = false;
  /// Require grad f . d = 0 on every direction of T_{Phi,S} ∩ N_S instead of restricting to critical ones.
  bool strict_criticality = false;
  /// Replay the certificate against the growth oracle.
  bool growth_replay = true;
};

namespace certify_detail {

/// Per-direction objects of the sufficient conditions at xbar.
struct SufficientDirection {
  Vec d;
  Region asym;    // T'' ∩ {d}^⊥ (cone)
  Region outer;   // T^2 ∩ {d}^⊥
  Region k_outer; // K-side outer set, for the k-side form
};

inline SufficientDirection sufficient_direction(const ProblemInstance& p, const Vec& d, Level level) {
  const Jet2 gj = p.g_jet(p.xbar);
  SufficientDirection s;
  s.d = d;
  s.asym = intersect_orthocomplement(linearized_phi_tangents(p, p.xbar, d, OracleKind::asymp2, level), d);
  s.asym.cone = true;
  s.outer = intersect_orthocomplement(linearized_phi_tangents(p, p.xbar, d, OracleKind::outer2, level), d);
  s.k_outer = k_second(p, p.xbar, gj.jacobian * d, SecondOrderKind::outer, level);
  return s;
}

/// Evaluates (i) and (ii) at lam; returns the two witnesses.
inline std::pair<Witness, Witness> sufficient_pair(const ProblemInstance& p, const SufficientDirection& s, const Vec& lam,
                                                   SufficientMode mode, double threshold, bool level_set) {
  const Jet2 gj = p.g_jet(p.xbar);
  Witness wi{"sufficient-i", p.xbar, s.d, lam, Vec(), boxed_adjoint_support(s.asym, gj.jacobian, lam), 0.0, false};
  wi.passed = strict_image_negativity(s.asym, gj.jacobian, lam);
  wi.level_set = level_set;
  const double q = lagrangian_jet(p, p.xbar, lam).quadform(s.d);
  const double sig = mode == SufficientMode::region_side ? adjoint_support(s.outer, gj.jacobian, lam, gj.second(s.d))
                                                         : support(s.k_outer, lam).value();
  Witness wii{mode == SufficientMode::region_side ? "sufficient-ii-region" : "sufficient-ii-k",
              p.xbar, s.d, lam, Vec(), q - sig, threshold, false};
  wii.passed = wii.achieved > threshold + 1e-12;
  wii.level_set = level_set;
  return {wi, wii};
}

/// Confirms sampled members of the linearized outer sets through the definition oracle on K.
inline void oracle_member_replay(const ProblemInstance& p, const std::vector<SufficientDirection>& dirs,
                                 CertificationReport& rep) {
  const Jet2 gj = p.g_jet(p.xbar);
  const Vec y = p.g_value(p.xbar);
  long confirmed = 0, rejected = 0, other = 0;
  for (size_t k = 0; k < dirs.size() && k < 8; ++k) {
    if (dirs[k].outer.has_note(kUpperSet)) continue;
    for (const auto& c : dirs[k].outer.cells) {
      const auto w = cell_point(c);
      if (!w) continue;
      const Vec z = gj.jacobian * *w + gj.second(dirs[k].d);
      const auto o = membership_by_definition(p.K, y, gj.jacobian * dirs[k].d, z, OracleKind::outer2);
      if (o.verdict == OracleVerdict::confirmed) ++confirmed;
      else if (o.verdict == OracleVerdict::rejected) ++rejected;
      else ++other;
    }
  }
  std::ostringstream os;
  os << "definition-oracle replay of sampled members: " << confirmed << " confirmed, " << rejected << " rejected, "
     << other << " inconclusive";
  rep.diag(os.str());
  if (rejected > 0 && rep.verdict == Verdict::certified) {
    rep.verdict = Verdict::inconclusive;
    rep.diag("a linearized member was rejected by the definition oracle");
  }
}

inline void growth_replay(const ProblemInstance& p, double kappa, CertificationReport& rep) {
  const auto est = growth_constant_estimate(p, p.options.delta, std::min<long>(p.options.samples, 4000),
                                            p.options.seed);
  Witness w{"growth", est.witness, Vec(), Vec(), Vec(), est.kappa_hat, kappa - 0.05, est.kappa_hat >= kappa - 0.05};
  rep.witnesses.push_back(w);
  std::ostringstream os;
  os << "growth replay: kappa_hat = " << est.kappa_hat << " over delta = " << p.options.delta;
  rep.diag(os.str());
  if (!w.passed) {
    rep.verdict = Verdict::violated;
    rep.kappa_bound.reset();
    rep.diag("growth replay refutes the certificate: a feasible sample grows slower than kappa - 0.05");
  }
}

}  // namespace certify_detail

/// Point-based sufficient condition at xbar for the given kappa, over mesh directions of T_{Phi,S} ∩ N_S
/// restricted to critical directions (grad f . d = 0 at sampled boundary points of S).
inline CertificationReport sufficient_point_check(const ProblemInstance& p, double kappa, SufficientMode mode,
                                                  const SufficientOptions& opts = {}) {
  using namespace certify_detail;
  if (!(kappa > 0.0)) throw InputError("kappa must be positive");
  CertificationReport rep;
  rep.check = std::string("sufficient-point/") + to_string(mode);
  const Vec& xb = p.xbar;
  const Jet2 gj = p.g_jet(xb);
  Region t = affine_preimage(k_tangent(p, xb, Level::level_set), gj.jacobian, Vec::Zero(p.m));
  t.cone = true;
  Region dset = intersect(t, normal_cone(p.S, xb, NormalKind::limiting));
  dset.cone = true;
  const auto rows = boundary_gradients(p);
  if (opts.strict_criticality) {
    const Mat id = Mat::Identity(p.n, p.n);
    for (const Vec& a : rows) {
      if (boxed_adjoint_support(dset, id, a) > 1e-9 || boxed_adjoint_support(dset, id, -a) > 1e-9) {
        rep.verdict = Verdict::hypotheses_not_met;
        rep.diag("strict criticality: grad f . d != 0 for some d in T_{Phi,S} ∩ N_S");
        return rep;
      }
    }
  }
  Region crit = dset;
  for (auto& c : crit.cells)
    for (const Vec& a : rows) c.add_eq(a, 0.0);
  crit = pruned(crit);
  const auto mesh = direction_mesh(crit, p.options.seed);
  const auto ma = multiplier_affine_set(p, xb);
  if (ma.empty) {
    rep.verdict = Verdict::hypotheses_not_met;
    rep.diag("no multiplier satisfies grad_x L = 0");
    return rep;
  }
  const auto lams = affine_lattice(ma, p.options.seed);
  const double factor = opts.literal_threshold ? 1.0 : 2.0;
  const bool level_set = !g_constant_on_S(p);
  std::vector<SufficientDirection> dirs(mesh.size());
  std::vector<std::optional<std::pair<Witness, Witness>>> found(mesh.size());
  std::vector<std::pair<Witness, Witness>> first_try(mesh.size());
  parallel_for(static_cast<long>(mesh.size()), [&](long i) {
    const size_t k = static_cast<size_t>(i);
    dirs[k] = sufficient_direction(p, mesh[k], Level::level_set);
    const double threshold = factor * kappa * mesh[k].squaredNorm();
    for (size_t l = 0; l < lams.size(); ++l) {
      auto pr = sufficient_pair(p, dirs[k], lams[l], mode, threshold, true);
      if (l == 0) first_try[k] = pr;
      if (pr.first.passed && pr.second.passed) {
        found[k] = std::move(pr);
        return;
      }
    }
  });
  std::vector<size_t> failing;
  for (size_t k = 0; k < mesh.size(); ++k)
    if (!found[k]) failing.push_back(k);
  std::ostringstream os;
  os << mesh.size() << " critical mesh directions, " << failing.size() << " without a passing multiplier";
  rep.diag(os.str());
  if (opts.literal_threshold) rep.diag("literal threshold kappa |d|^2 in use");
  if (level_set) rep.diag("level-set objects are upper sets: sound for necessary use, heuristic for sufficient use");
  if (!failing.empty()) {
    rep.verdict = Verdict::hypotheses_not_met;
    for (size_t j = 0; j < failing.size() && j < 5; ++j) {
      const auto& pr = first_try[failing[j]];
      rep.diag("failing direction " + vec_text(mesh[failing[j]]));
      rep.witnesses.push_back(pr.first);
      rep.witnesses.push_back(pr.second);
    }
    return rep;
  }
  rep.verdict = Verdict::certified;
  rep.kappa_bound = kappa;
  if (mesh.empty()) rep.diag("no critical direction; the conditions hold vacuously");
  double worst = kInf;
  size_t worst_k = 0;
  for (size_t k = 0; k < mesh.size(); ++k)
    if (found[k]->second.achieved < worst) worst = found[k]->second.achieved, worst_k = k;
  if (!mesh.empty()) {
    rep.witnesses.push_back(found[worst_k]->first);
    rep.witnesses.push_back(found[worst_k]->second);
  }
  oracle_member_replay(p, dirs, rep);
  if (opts.growth_replay) growth_replay(p, kappa, rep);
  return rep;
}

/// Sufficient condition at an isolated point of S: grad f . d >= 0 on T_Phi(xbar), and one multiplier fixed before
/// d satisfying (i) and (ii) > 0 for every mesh direction of C(xbar).
inline CertificationReport sufficient_isolated_check(const ProblemInstance& p) {
  using namespace certify_detail;
  Region ts = tangent_cone(p.S, p.xbar);
  ts.cone = true;
  if (!cone_is_trivial(ts)) throw DomainError("xbar is not isolated in S");
  CertificationReport rep;
  rep.check = "sufficient-isolated";
  const Vec& xb = p.xbar;
  const Region tphi = linearized_phi_tangents(p, xb, Vec::Zero(p.n), OracleKind::tangent);
  const double first = infimum(tphi, p.f.gradient(xb)).value();
  Witness w0{"isolated-first-order", xb, Vec(), Vec(), Vec(), first, 0.0, first >= -1e-9};
  rep.witnesses.push_back(w0);
  if (!w0.passed) {
    rep.verdict = Verdict::hypotheses_not_met;
    rep.diag("grad f . d < 0 for some d in T_Phi(xbar)");
    return rep;
  }
  const auto ma = multiplier_affine_set(p, xb);
  if (ma.empty) {
    rep.verdict = Verdict::hypotheses_not_met;
    rep.diag("no multiplier satisfies grad_x L = 0");
    return rep;
  }
  const auto mesh = direction_mesh(critical_cone(p, xb), p.options.seed);
  std::vector<SufficientDirection> dirs(mesh.size());
  parallel_for(static_cast<long>(mesh.size()),
               [&](long i) { dirs[static_cast<size_t>(i)] = sufficient_direction(p, mesh[static_cast<size_t>(i)], Level::point); });
  const auto lams = affine_lattice(ma, p.options.seed);
  std::vector<long> binding(lams.size(), -1);
  std::vector<std::pair<Witness, Witness>> worst(lams.size());
  parallel_for(static_cast<long>(lams.size()), [&](long l) {
    double low = kInf;
    for (size_t k = 0; k < dirs.size(); ++k) {
      auto pr = sufficient_pair(p, dirs[k], lams[static_cast<size_t>(l)], SufficientMode::region_side, 0.0, false);
      if (!pr.first.passed || !pr.second.passed) {
        binding[static_cast<size_t>(l)] = static_cast<long>(k);
        worst[static_cast<size_t>(l)] = std::move(pr);
        return;
      }
      if (pr.second.achieved < low) low = pr.second.achieved, worst[static_cast<size_t>(l)] = std::move(pr);
    }
  });
  std::ostringstream os;
  os << mesh.size() << " critical mesh directions, " << lams.size() << " multiplier candidates";
  rep.diag(os.str());
  for (size_t l = 0; l < lams.size(); ++l) {
    if (binding[l] >= 0) continue;
    rep.verdict = Verdict::certified;
    if (mesh.empty()) {
      rep.diag("C(xbar) = {0}; the conditions hold vacuously");
      Witness wl{"isolated-multiplier", xb, Vec(), lams[l], Vec(), 0.0, 0.0, true};
      rep.witnesses.push_back(wl);
    } else {
      rep.witnesses.push_back(worst[l].first);
      rep.witnesses.push_back(worst[l].second);
    }
    oracle_member_replay(p, dirs, rep);
    return rep;
  }
  rep.verdict = Verdict::hypotheses_not_met;
  rep.diag("no single multiplier passes every direction; binding direction for lam0: " +
           vec_text(mesh[static_cast<size_t>(binding.front())]));
  rep.witnesses.push_back(worst.front().first);
  rep.witnesses.push_back(worst.front().second);
  return rep;
}

}  // namespace sharpcheck
