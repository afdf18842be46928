#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "sharpcheck/error.hpp"
#include "sharpcheck/extended_real.hpp"
#include "sharpcheck/linalg.hpp"

namespace sharpcheck {

/// One linear row: `normal . x <= offset` as an inequality, `normal . x = offset` as an equality.
struct LinRow {
  Vec normal;
  double offset = 0.0;
};

/// maximize objective . x  s.t. ineq rows, eq rows; x is free.
struct LinearProgram {
  Vec objective;
  std::vector<LinRow> ineq;
  std::vector<LinRow> eq;
};

enum class LpStatus { optimal, unbounded, infeasible };

inline const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::unbounded: return "unbounded";
    case LpStatus::infeasible: return "infeasible";
  }
  return "?";
}

struct LpOutcome {
  LpStatus status = LpStatus::infeasible;
  ExtendedReal value = ExtendedReal::neg_inf();
  /// Optimal point, or an improving feasible ray when unbounded. Empty when infeasible.
  Vec witness;
  /// A feasible point; set for optimal and unbounded outcomes.
  Vec point;
};

namespace lp_detail {

inline constexpr double kPivotTol = 1e-9;
inline constexpr double kCostTol = 1e-10;
inline constexpr double kPhaseOneTol = 1e-8;
inline constexpr long kMaxIterations = 200000;

struct Tableau {
  Mat t;                    // rows x (cols + 1); the last column is the right-hand side
  std::vector<long> basis;  // basic column of each row
  long cols = 0;

  [[nodiscard]] double rhs(long i) const { return t(i, cols); }

  void pivot(long r, long c) {
    const double p = t(r, c);
    t.row(r) /= p;
    for (long i = 0; i < t.rows(); ++i) {
      if (i == r) continue;
      const double f = t(i, c);
      if (f != 0.0) t.row(i) -= f * t.row(r);
    }
    basis[static_cast<size_t>(r)] = c;
  }
};

enum class IterResult { optimal, unbounded };

// Bland's rule: lowest entering index with positive reduced cost, lowest basic index on ratio ties.
inline IterResult iterate(Tableau& tab, const Vec& cost, const std::vector<bool>& enterable, long& entering_out) {
  for (long iter = 0; iter < kMaxIterations; ++iter) {
    long enter = -1;
    for (long j = 0; j < tab.cols; ++j) {
      if (!enterable[static_cast<size_t>(j)]) continue;
      double rc = cost(j);
      for (long i = 0; i < tab.t.rows(); ++i) rc -= cost(tab.basis[static_cast<size_t>(i)]) * tab.t(i, j);
      if (rc > kCostTol) {
        enter = j;
        break;
      }
    }
    if (enter < 0) return IterResult::optimal;
    long leave = -1;
    double best = 0.0;
    for (long i = 0; i < tab.t.rows(); ++i) {
      const double a = tab.t(i, enter);
      if (a <= kPivotTol) continue;
      const double ratio = tab.rhs(i) / a;
      if (leave < 0 || ratio < best - 1e-12) {
        leave = i;
        best = ratio;
      } else if (ratio <= best + 1e-12 &&
                 tab.basis[static_cast<size_t>(i)] < tab.basis[static_cast<size_t>(leave)]) {
        leave = i;
      }
    }
    if (leave < 0) {
      entering_out = enter;
      return IterResult::unbounded;
    }
    tab.pivot(leave, enter);
  }
  throw NumericalError("simplex iteration limit reached");
}

inline double row_violation(const LinRow& r, const Vec& x, bool equality) {
  const double s = r.normal.dot(x) - r.offset;
  return equality ? std::abs(s) : std::max(0.0, s);
}

}  // namespace lp_detail

/// Dense two-phase simplex with equilibrated rows and Bland's pivoting. Deterministic.
inline LpOutcome solve_lp(const LinearProgram& p) {
  using namespace lp_detail;
  const long n = p.objective.size();
  for (const auto& r : p.ineq) require_dim(r.normal.size(), n, "LP inequality row");
  for (const auto& r : p.eq) require_dim(r.normal.size(), n, "LP equality row");
  if (!p.objective.allFinite()) throw DomainError("LP objective is not finite");

  // Equilibrate; drop zero rows after checking them.
  struct Prepared {
    Vec a;
    double b;
    bool equality;
  };
  std::vector<Prepared> rows;
  auto prepare = [&](const LinRow& r, bool equality) -> bool {
    if (!r.normal.allFinite() || !std::isfinite(r.offset)) throw DomainError("LP row is not finite");
    const double s = r.normal.cwiseAbs().maxCoeff();
    if (n == 0 || s == 0.0) {
      return equality ? std::abs(r.offset) <= 1e-9 : r.offset >= -1e-9;
    }
    rows.push_back({r.normal / s, r.offset / s, equality});
    return true;
  };
  bool trivially_infeasible = false;
  for (const auto& r : p.ineq) trivially_infeasible |= !prepare(r, false);
  for (const auto& r : p.eq) trivially_infeasible |= !prepare(r, true);
  if (trivially_infeasible) return {LpStatus::infeasible, ExtendedReal::neg_inf(), Vec(), Vec()};
  if (n == 0) return {LpStatus::optimal, ExtendedReal::finite(0.0), Vec(), Vec()};

  const long m = static_cast<long>(rows.size());
  long n_slack = 0;
  for (const auto& r : rows) n_slack += r.equality ? 0 : 1;
  std::vector<bool> needs_art(static_cast<size_t>(m));
  long n_art = 0;
  for (long i = 0; i < m; ++i) {
    const auto& r = rows[static_cast<size_t>(i)];
    needs_art[static_cast<size_t>(i)] = r.equality || r.b < 0;
    n_art += needs_art[static_cast<size_t>(i)] ? 1 : 0;
  }
  const long cols = 2 * n + n_slack + n_art;
  Tableau tab;
  tab.cols = cols;
  tab.t = Mat::Zero(m, cols + 1);
  tab.basis.assign(static_cast<size_t>(m), -1);
  long slack_col = 2 * n;
  long art_col = 2 * n + n_slack;
  const long art_begin = art_col;
  for (long i = 0; i < m; ++i) {
    const auto& r = rows[static_cast<size_t>(i)];
    const double sign = r.b < 0 ? -1.0 : 1.0;
    tab.t.block(i, 0, 1, n) = sign * r.a.transpose();
    tab.t.block(i, n, 1, n) = -sign * r.a.transpose();
    tab.t(i, cols) = sign * r.b;
    if (!r.equality) {
      tab.t(i, slack_col) = sign;
      if (sign > 0) tab.basis[static_cast<size_t>(i)] = slack_col;
      ++slack_col;
    }
    if (needs_art[static_cast<size_t>(i)]) {
      tab.t(i, art_col) = 1.0;
      tab.basis[static_cast<size_t>(i)] = art_col;
      ++art_col;
    }
  }

  long entering = -1;
  if (n_art > 0) {
    Vec cost = Vec::Zero(cols);
    cost.tail(n_art).setConstant(-1.0);
    std::vector<bool> enterable(static_cast<size_t>(cols), true);
    iterate(tab, cost, enterable, entering);  // phase one is bounded
    double infeas = 0.0;
    for (long i = 0; i < m; ++i) {
      if (tab.basis[static_cast<size_t>(i)] >= art_begin) infeas += tab.rhs(i);
    }
    if (infeas > kPhaseOneTol) return {LpStatus::infeasible, ExtendedReal::neg_inf(), Vec(), Vec()};
    for (long i = 0; i < m; ++i) {
      if (tab.basis[static_cast<size_t>(i)] < art_begin) continue;
      long best = -1;
      for (long j = 0; j < art_begin; ++j) {
        if (std::abs(tab.t(i, j)) > kPivotTol && (best < 0 || std::abs(tab.t(i, j)) > std::abs(tab.t(i, best)) * 10)) {
          best = j;
        }
      }
      if (best >= 0) tab.pivot(i, best);
      // otherwise the row is redundant and its artificial stays basic at zero
    }
  }

  Vec cost = Vec::Zero(cols);
  cost.head(n) = p.objective;
  cost.segment(n, n) = -p.objective;
  std::vector<bool> enterable(static_cast<size_t>(cols), true);
  for (long j = art_begin; j < cols; ++j) enterable[static_cast<size_t>(j)] = false;
  const IterResult res = iterate(tab, cost, enterable, entering);

  Vec full = Vec::Zero(cols);
  for (long i = 0; i < m; ++i) full(tab.basis[static_cast<size_t>(i)]) = tab.rhs(i);
  Vec x = full.head(n) - full.segment(n, n);

  double worst = 0.0;
  for (const auto& r : p.ineq) worst = std::max(worst, row_violation(r, x, false) / (1.0 + std::abs(r.offset)));
  for (const auto& r : p.eq) worst = std::max(worst, row_violation(r, x, true) / (1.0 + std::abs(r.offset)));
  if (worst > 1e-6) {
    throw NumericalError("simplex basis is numerically singular: relative residual " + std::to_string(worst));
  }

  if (res == IterResult::unbounded) {
    Vec dir = Vec::Zero(cols);
    dir(entering) = 1.0;
    for (long i = 0; i < m; ++i) dir(tab.basis[static_cast<size_t>(i)]) = -tab.t(i, entering);
    Vec ray = dir.head(n) - dir.segment(n, n);
    return {LpStatus::unbounded, ExtendedReal::pos_inf(), ray, x};
  }
  return {LpStatus::optimal, ExtendedReal::finite(p.objective.dot(x)), x, x};
}

/// Feasibility with strict margin: maximizes s such that rows hold with slack s (s capped at 1).
/// Returns the achieved margin (negative infinity when infeasible) and a point.
inline std::pair<double, Vec> max_margin(long n, const std::vector<LinRow>& ineq, const std::vector<LinRow>& eq,
                                         const std::vector<LinRow>& strict) {
  LinearProgram p;
  p.objective = linalg::unit(n + 1, n);
  auto lift = [&](const LinRow& r, double slack_coef) {
    Vec a(n + 1);
    a.head(n) = r.normal;
    a(n) = slack_coef;
    return LinRow{a, r.offset};
  };
  for (const auto& r : ineq) p.ineq.push_back(lift(r, 0.0));
  for (const auto& r : eq) p.eq.push_back(lift(r, 0.0));
  for (const auto& r : strict) {
    const double s = std::max(1.0, r.normal.norm());
    p.ineq.push_back(lift(LinRow{r.normal / s, r.offset / s}, 1.0));
  }
  p.ineq.push_back(LinRow{linalg::unit(n + 1, n), 1.0});
  const auto out = solve_lp(p);
  if (out.status != LpStatus::optimal) return {-std::numeric_limits<double>::infinity(), Vec()};
  return {out.value.value(), out.witness.head(n)};
}

}  // namespace sharpcheck
