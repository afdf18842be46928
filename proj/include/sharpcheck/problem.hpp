#pragma once

#include <string>
#include <vector>

#include "sharpcheck/base_set.hpp"
#include "sharpcheck/poly_expr.hpp"

namespace sharpcheck {

struct Options {
  double epsilon = 0.0;
  double delta = 0.25;
  double rho = 0.5;
  unsigned long long seed = 42;
  double tolerance = 1e-9;
  /// Enlargement factor of g(S) in the level-set objects.
  double level_eps = 1e-3;
  long samples = 10000;
  std::vector<double> kappa_grid = default_kappa_grid();

  static std::vector<double> default_kappa_grid() {
    std::vector<double> g;
    for (int i = 0; i <= 60; ++i) g.push_back(std::pow(10.0, -4.0 + 6.0 * i / 60.0));
    return g;
  }
};

struct ProblemInstance {
  long n = 0;
  long m = 0;
  Polynomial f;
  std::vector<Polynomial> g;
  BaseSet K;
  BaseSet S;
  Vec xbar;
  Options options;
  /// Expression sources, kept for digests and report echo.
  std::string objective_text;
  std::vector<std::string> constraint_texts;

  [[nodiscard]] Vec g_value(const Vec& x) const {
    Vec v(m);
    for (long i = 0; i < m; ++i) v(i) = g[static_cast<size_t>(i)].value(x);
    return v;
  }
  [[nodiscard]] Jet2 g_jet(const Vec& x) const { return evaluate_jet(g, x); }
  [[nodiscard]] bool feasible(const Vec& x, double tol = kMembershipTol) const { return membership(K, g_value(x), tol); }
  [[nodiscard]] bool g_affine() const {
    for (const auto& p : g)
      if (!p.affine()) return false;
    return true;
  }
};

/// Builds an instance from expression strings and checks dimensions.
inline ProblemInstance make_problem(long n, const std::string& objective, const std::vector<std::string>& constraints,
                                    BaseSet K, BaseSet S, Vec xbar, Options options = {}) {
  if (n < 1) throw InputError("n must be positive");
  if (constraints.empty()) throw InputError("at least one constraint component is required");
  ProblemInstance p;
  p.n = n;
  p.m = static_cast<long>(constraints.size());
  p.objective_text = objective;
  p.constraint_texts = constraints;
  p.f = parse_expression(objective, n);
  for (const auto& c : constraints) p.g.push_back(parse_expression(c, n));
  if (K.dim != p.m) throw DimensionError("K must have dimension m");
  if (S.dim != n) throw DimensionError("S must have dimension n");
  if (xbar.size() != n) throw DimensionError("xbar must have dimension n");
  if (!(options.epsilon >= 0.0 && options.epsilon < 0.5)) throw InputError("epsilon must lie in [0, 1/2)");
  if (!(options.delta > 0.0)) throw InputError("delta must be positive");
  if (!(options.rho > 0.0)) throw InputError("rho must be positive");
  p.K = std::move(K);
  p.S = std::move(S);
  p.xbar = std::move(xbar);
  p.options = std::move(options);
  if (!p.feasible(p.xbar)) throw InputError("candidate infeasible");
  if (!membership(p.S, p.xbar)) throw InputError("candidate not in S");
  return p;
}

struct LagrangianJet {
  Vec gradient;
  Mat hessian;
  [[nodiscard]] double quadform(const Vec& d) const { return d.dot(hessian * d); }
};

/// Gradient and Hessian in x of f + <lam, g>.
inline LagrangianJet lagrangian_jet(const ProblemInstance& p, const Vec& x, const Vec& lam) {
  require_dim(lam.size(), p.m, "multiplier");
  const Jet2 gj = p.g_jet(x);
  LagrangianJet out;
  out.gradient = p.f.gradient(x) + gj.jacobian.transpose() * lam;
  out.hessian = p.f.hessian(x) + gj.weighted_hessian(lam);
  return out;
}

/// w in V_{rho,delta}(d): |w| <= delta and | |d| w - |w| d | <= rho |w| |d|.
inline bool in_directional_neighborhood(const Vec& w, const Vec& d, double rho, double delta) {
  if (w.norm() > delta) return false;
  const double nd = d.norm();
  if (nd == 0.0) return true;
  return (nd * w - w.norm() * d).norm() <= rho * w.norm() * nd;
}

}  // namespace sharpcheck
