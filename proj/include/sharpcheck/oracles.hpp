#pragma once

#include <cmath>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "sharpcheck/parallel.hpp"
#include "sharpcheck/problem.hpp"
#include "sharpcheck/variational.hpp"

namespace sharpcheck {

/// Geometric schedule t_k = t0 q^k with the paired rate r_k = t_k^{2/3}.
struct Schedule {
  double t0 = 0.1;
  double q = 0.5;
  int terms = 20;

  [[nodiscard]] double t(int k) const { return t0 * std::pow(q, k); }
  [[nodiscard]] static double r(double t) { return std::pow(t, 2.0 / 3.0); }
  [[nodiscard]] std::vector<double> ts() const {
    std::vector<double> out;
    for (int k = 0; k < terms; ++k) out.push_back(t(k));
    return out;
  }
};

enum class OracleKind { tangent, outer2, asymp2 };
enum class OracleVerdict { confirmed, rejected, inconclusive };

inline const char* to_string(OracleVerdict v) {
  switch (v) {
    case OracleVerdict::confirmed: return "confirmed";
    case OracleVerdict::rejected: return "rejected";
    case OracleVerdict::inconclusive: return "boundary-inconclusive";
  }
  return "?";
}

struct OracleOutcome {
  OracleVerdict verdict = OracleVerdict::inconclusive;
  /// Extrapolated limit of the normalized perturbation |w_k - w|.
  double limit = 0.0;
  std::vector<double> perturbations;
};

inline constexpr double kConfirmBelow = 2e-8;
inline constexpr double kRejectAbove = 1e-7;

namespace oracle_detail {

/// dist(y + q, leaf) evaluated in coordinates centred at y, so precision scales with |q|.
inline double local_leaf_distance(const Leaf& l, const Vec& y, const Vec& q) {
  const Vec z = l.slice(y), e = l.slice(q);
  if (l.is_ball) {
    const Vec c = l.center - z;
    const double cn = c.norm();
    double resid = (cn - l.radius) * (cn + l.radius);
    if (std::abs(cn - l.radius) <= kMembershipTol) resid = 0.0;
    const double num = e.squaredNorm() - 2.0 * e.dot(c) + resid;
    if (num <= 0.0) return 0.0;
    return num / ((e - c).norm() + l.radius);
  }
  PolyCell local = PolyCell::all_space(l.dim);
  const double len = e.norm();
  for (const auto& r : l.cell.ineq) {
    double s = r.offset - r.normal.dot(z);
    if (std::abs(s) <= kMembershipTol * std::max(1.0, r.normal.norm())) s = 0.0;
    // a row with slack beyond 4|a||e| cannot bind the projection (which lies within 2|e| of y)
    if (!l.is_box && s > 4.0 * r.normal.norm() * len) continue;
    local.ineq.push_back({r.normal, s});
  }
  for (const auto& r : l.cell.eq) {
    double s = r.offset - r.normal.dot(z);
    if (std::abs(s) <= kMembershipTol * std::max(1.0, r.normal.norm())) s = 0.0;
    local.eq.push_back({r.normal, s});
  }
  if (l.is_box) {
    double acc = 0.0;
    for (long i = 0; i < l.dim; ++i) {
      double lo = -std::numeric_limits<double>::infinity(), hi = std::numeric_limits<double>::infinity();
      for (const auto& r : local.ineq) {
        if (r.normal(i) > 0) hi = std::min(hi, r.offset / r.normal(i));
        if (r.normal(i) < 0) lo = std::max(lo, r.offset / r.normal(i));
      }
      for (const auto& r : local.eq)
        if (r.normal(i) != 0) lo = hi = r.offset / r.normal(i);
      const double c = std::clamp(e(i), lo, hi);
      acc += (e(i) - c) * (e(i) - c);
    }
    return std::sqrt(acc);
  }
  // scale to |e| = 1 so the projection tolerance is relative to the perturbation size
  if (len == 0.0) return project_onto_cell(local, e).distance;
  for (auto& r : local.ineq) r.offset /= len;
  for (auto& r : local.eq) r.offset /= len;
  return len * project_onto_cell(local, e / len, 1e-13).distance;
}

inline double local_distance(const std::vector<ConvexPiece>& pieces, const Vec& y, const Vec& q) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : pieces) {
    double acc = 0.0;
    for (const auto& l : p.leaves) {
      const double d = local_leaf_distance(l, y, q);
      acc += d * d;
    }
    best = std::min(best, std::sqrt(acc));
  }
  return best;
}

/// Least-squares fit of e(t) = L + sum_j a_j t^{p_j} on the tail; returns max(L, 0).
inline double extrapolate(const std::vector<double>& ts, const std::vector<double>& es, const std::vector<double>& powers) {
  const long k = static_cast<long>(ts.size());
  const long cols = 1 + static_cast<long>(powers.size());
  Mat a(k, cols);
  Vec b(k);
  for (long i = 0; i < k; ++i) {
    a(i, 0) = 1.0;
    for (long j = 0; j < static_cast<long>(powers.size()); ++j) a(i, j + 1) = std::pow(ts[static_cast<size_t>(i)], powers[static_cast<size_t>(j)]);
    b(i) = es[static_cast<size_t>(i)];
  }
  const Vec coef = a.colPivHouseholderQr().solve(b);
  return std::max(coef(0), 0.0);
}

}  // namespace oracle_detail

/// Decides w ∈ T(y) / T²(y;d) / T''(y;d) from the defining sequences: the minimal perturbation
/// |w_k - w| with y + t_k d + c_k w_k in the set is computed exactly for every schedule term and
/// its limit is extrapolated.
inline OracleOutcome membership_by_definition(const BaseSet& s, const Vec& y, const Vec& d, const Vec& w, OracleKind kind,
                                              const Schedule& sched = {}) {
  require_dim(y.size(), s.dim, "point");
  require_dim(d.size(), s.dim, "direction");
  require_dim(w.size(), s.dim, "second-order vector");
  if (!membership(s, y)) throw DomainError("point is not in the set");
  const auto pieces = convex_pieces(s);
  OracleOutcome out;
  std::vector<double> ts;
  for (double t : sched.ts()) {
    double scale;
    Vec q;
    switch (kind) {
      case OracleKind::tangent:
        scale = t;
        q = t * w;
        break;
      case OracleKind::outer2:
        scale = 0.5 * t * t;
        q = t * d + scale * w;
        break;
      case OracleKind::asymp2:
      default:
        scale = 0.5 * t * Schedule::r(t);
        q = t * d + scale * w;
        break;
    }
    out.perturbations.push_back(oracle_detail::local_distance(pieces, y, q) / scale);
    ts.push_back(t);
  }
  const size_t tail = std::min<size_t>(8, ts.size());
  const std::vector<double> tt(ts.end() - static_cast<long>(tail), ts.end());
  const std::vector<double> et(out.perturbations.end() - static_cast<long>(tail), out.perturbations.end());
  bool settled_zero = true;
  for (size_t i = tail > 3 ? tail - 3 : 0; i < tail; ++i) settled_zero &= et[i] <= 1e-12;
  if (settled_zero) {
    out.limit = 0.0;
  } else {
    const std::vector<double> powers = kind == OracleKind::asymp2 ? std::vector<double>{1.0 / 3.0, 2.0 / 3.0, 1.0}
                                                                   : std::vector<double>{1.0, 2.0};
    out.limit = std::min(oracle_detail::extrapolate(tt, et, powers), et.back());
  }
  if (out.limit <= kConfirmBelow)
    out.verdict = OracleVerdict::confirmed;
  else if (out.limit >= kRejectAbove)
    out.verdict = OracleVerdict::rejected;
  else
    out.verdict = OracleVerdict::inconclusive;
  return out;
}

// ---------------------------------------------------------------------------------------------
// sampling

struct FeasibleSample {
  std::vector<Vec> points;
  long proposals = 0;
  long direct_hits = 0;
  std::vector<std::string> diagnostics;
};

namespace oracle_detail {

inline Vec uniform_in_ball(std::mt19937_64& rng, long n, double radius) {
  std::normal_distribution<double> nd;
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  Vec z(n);
  for (long i = 0; i < n; ++i) z(i) = nd(rng);
  const double s = z.norm();
  if (s == 0.0) return Vec::Zero(n);
  return z * (radius * std::pow(ud(rng), 1.0 / static_cast<double>(n)) / s);
}

/// Last feasible point on the segment from a feasible `inside` toward an infeasible `outside`.
inline Vec bisect_to_boundary(const ProblemInstance& p, Vec inside, Vec outside, int steps = 40) {
  for (int k = 0; k < steps; ++k) {
    const Vec mid = 0.5 * (inside + outside);
    if (p.feasible(mid))
      inside = mid;
    else
      outside = mid;
  }
  return inside;
}

}  // namespace oracle_detail

/// Feasible points within delta of `center` (default xbar): uniform proposals, infeasible ones pulled
/// back to the boundary by bisection toward the centre.
inline FeasibleSample sample_feasible(const ProblemInstance& p, double delta, long count, unsigned long long seed,
                                      const std::optional<Vec>& center = std::nullopt) {
  if (!(delta > 0.0)) throw DomainError("delta must be positive");
  const Vec c = center.value_or(p.xbar);
  if (!p.feasible(c)) throw DomainError("sampling centre is infeasible");
  FeasibleSample out;
  out.points.resize(static_cast<size_t>(count));
  std::vector<char> hit(static_cast<size_t>(count), 0);
  parallel_for(count, [&](long i) {
    std::mt19937_64 rng(item_seed(seed, static_cast<std::uint64_t>(i)));
    const Vec x = c + oracle_detail::uniform_in_ball(rng, p.n, delta);
    if (p.feasible(x)) {
      out.points[static_cast<size_t>(i)] = x;
      hit[static_cast<size_t>(i)] = 1;
    } else {
      out.points[static_cast<size_t>(i)] = oracle_detail::bisect_to_boundary(p, c, x);
    }
  });
  out.proposals = count;
  for (char h : hit) out.direct_hits += h;
  if (out.direct_hits < count / 100) out.diagnostics.push_back("thin feasible set");
  return out;
}

/// Distance to the solution set S.
inline double dist_to_S(const ProblemInstance& p, const Vec& x) { return exact_distance(p.S, x).distance; }

struct GrowthEstimate {
  double kappa_hat = std::numeric_limits<double>::infinity();
  Vec witness;
  long samples = 0;
  long used = 0;
  double delta = 0.0;
  std::vector<std::string> diagnostics;
};

/// min over exactly feasible samples with dist(x,S) > 1e-6 of (f(x) - f(xbar)) / dist(x,S)^2.
inline GrowthEstimate growth_constant_estimate(const ProblemInstance& p, double delta, long count,
                                               unsigned long long seed) {
  const FeasibleSample fs = sample_feasible(p, delta, count, seed);
  GrowthEstimate out;
  out.samples = count;
  out.delta = delta;
  out.diagnostics = fs.diagnostics;
  const double fbar = p.f.value(p.xbar);
  for (const auto& x : fs.points) {
    const double dist = dist_to_S(p, x);
    // tolerance-feasible points outside the exact set would dominate the ratio at small distances
    if (dist <= 1e-6 || !p.feasible(x, 0.0)) continue;
    ++out.used;
    const double ratio = (p.f.value(x) - fbar) / (dist * dist);
    if (ratio < out.kappa_hat) {
      out.kappa_hat = ratio;
      out.witness = x;
    }
  }
  if (out.used == 0) out.diagnostics.push_back("no sample at positive distance from S");
  return out;
}

struct MscqEstimate {
  double kappa_hat = 0.0;
  bool divergent = false;
  long infeasible_samples = 0;
  double slope = 0.0;  // log-log fit of ratio against sample radius
  Vec witness;
  std::vector<std::string> diagnostics;
};

namespace oracle_detail {

/// Upper bound on dist(x, Φ) from feasible candidates inside B(x, radius) refined by bisection.
inline double dist_to_feasible(const ProblemInstance& p, const Vec& x, const Vec& known, double radius,
                               std::mt19937_64& rng) {
  double best = (x - known).norm();
  best = std::min(best, (x - bisect_to_boundary(p, known, x)).norm());
  for (int k = 0; k < 200; ++k) {
    const Vec c = x + uniform_in_ball(rng, x.size(), radius);
    if (!p.feasible(c)) continue;
    best = std::min(best, (x - bisect_to_boundary(p, c, x)).norm());
  }
  return best;
}

}  // namespace oracle_detail

/// Largest observed dist(x', Φ) / dist(g(x'), K) over x' in x + V_{rho,delta}(d), with |x' - x|
/// log-uniform over six decades.
inline MscqEstimate mscq_modulus_estimate(const ProblemInstance& p, const Vec& x, const Vec& d, double rho,
                                          double delta, long count, unsigned long long seed) {
  require_dim(x.size(), p.n, "point");
  require_dim(d.size(), p.n, "direction");
  if (!p.feasible(x)) throw DomainError("point is infeasible");
  std::vector<double> ratios(static_cast<size_t>(count), -1.0);
  std::vector<Vec> points(static_cast<size_t>(count));
  std::vector<double> radii(static_cast<size_t>(count), 0.0);
  parallel_for(count, [&](long i) {
    std::mt19937_64 rng(item_seed(seed, static_cast<std::uint64_t>(i)));
    std::uniform_real_distribution<double> ud(0.0, 1.0);
    Vec dir;
    for (int attempt = 0; attempt < 100; ++attempt) {
      Vec z = oracle_detail::uniform_in_ball(rng, p.n, 1.0);
      if (d.norm() > 0) z = d.normalized() + rho * z;
      if (z.norm() == 0.0) continue;
      z.normalize();
      if (in_directional_neighborhood(z * delta * 0.5, d, rho, delta)) {
        dir = z;
        break;
      }
    }
    if (dir.size() == 0) return;
    const double radius = delta * std::pow(10.0, -6.0 * ud(rng));
    const Vec xp = x + radius * dir;
    points[static_cast<size_t>(i)] = xp;
    radii[static_cast<size_t>(i)] = radius;
    if (p.feasible(xp)) return;
    const double resid = exact_distance(p.K, p.g_value(xp)).distance;
    if (resid <= 0.0) return;
    ratios[static_cast<size_t>(i)] = oracle_detail::dist_to_feasible(p, xp, x, radius, rng) / resid;
  });
  MscqEstimate out;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (long i = 0; i < count; ++i) {
    const double r = ratios[static_cast<size_t>(i)];
    if (r <= 0) continue;
    ++out.infeasible_samples;
    const double lx = std::log(radii[static_cast<size_t>(i)]), ly = std::log(r);
    sx += lx, sy += ly, sxx += lx * lx, sxy += lx * ly;
    if (r > out.kappa_hat) {
      out.kappa_hat = r;
      out.witness = points[static_cast<size_t>(i)];
    }
  }
  // ratios that blow up like a power of 1/|x' - x| (the sample floor is set by the feasibility tolerance)
  const double nn = static_cast<double>(out.infeasible_samples);
  const double den = nn * sxx - sx * sx;
  out.slope = (out.infeasible_samples > 10 && den > 1e-12) ? (nn * sxy - sx * sy) / den : 0.0;
  if (out.kappa_hat > 1e6 || (out.slope < -0.5 && out.kappa_hat > 100.0)) out.divergent = true;
  if (out.infeasible_samples == 0) out.diagnostics.push_back("no infeasible sample in the directional neighborhood");
  return out;
}

struct DistanceLemmaOutcome {
  bool pass = true;
  double violating_t = 0.0;
  std::vector<std::pair<double, double>> values;  // (t, dist(x + t d, S))
};

/// Checks dist(x + t d, S) >= t (1 - 2 eps) |d| along the schedule.
inline DistanceLemmaOutcome proximal_distance_check(const BaseSet& s, const Vec& x, const Vec& d, double eps,
                                                    const Schedule& sched = {}) {
  if (!eps_proximal_membership(s, x, d, eps)) throw DomainError("precondition violation: not an eps-proximal normal");
  DistanceLemmaOutcome out;
  for (double t : sched.ts()) {
    const double dist = exact_distance(s, x + t * d).distance;
    out.values.push_back({t, dist});
    const double bound = t * (1.0 - 2.0 * eps) * d.norm();
    if (dist < bound * (1.0 - 1e-12) - 1e-15 && out.pass) {
      out.pass = false;
      out.violating_t = t;
    }
  }
  return out;
}

struct DdProbe {
  bool holds_on_box = true;
  double box_radius = 0.0;
  Vec witness;
};

/// Searches xbar + [-R, R]^n for points of the level set {g = g(xbar)} at distance >= 0.1 R.
inline DdProbe dd_condition_probe(const ProblemInstance& p, double box_radius, long count, unsigned long long seed) {
  const Vec gbar = p.g_value(p.xbar);
  std::vector<Vec> found(static_cast<size_t>(count));
  parallel_for(count, [&](long i) {
    std::mt19937_64 rng(item_seed(seed, static_cast<std::uint64_t>(i)));
    std::uniform_real_distribution<double> ud(-box_radius, box_radius);
    Vec x(p.n);
    for (long k = 0; k < p.n; ++k) x(k) = p.xbar(k) + ud(rng);
    for (int it = 0; it < 60; ++it) {
      const Vec r = p.g_value(x) - gbar;
      if (r.norm() <= 1e-12) break;
      const Mat j = p.g_jet(x).jacobian;
      x -= j.completeOrthogonalDecomposition().solve(r);
    }
    const bool in_box = ((x - p.xbar).cwiseAbs().maxCoeff() <= box_radius);
    if (in_box && (p.g_value(x) - gbar).norm() <= 1e-6 && (x - p.xbar).norm() >= 0.1 * box_radius)
      found[static_cast<size_t>(i)] = x;
  });
  DdProbe out;
  out.box_radius = box_radius;
  for (const auto& x : found)
    if (x.size() > 0) {
      out.holds_on_box = false;
      out.witness = x;
      break;
    }
  return out;
}

}  // namespace sharpcheck
