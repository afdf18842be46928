#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "sharpcheck/certify_core.hpp"

namespace sharpcheck {

enum class Verdict { certified, violated, satisfied, inconclusive, hypotheses_not_met };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::certified: return "certified";
    case Verdict::violated: return "violated";
    case Verdict::satisfied: return "satisfied";
    case Verdict::inconclusive: return "inconclusive";
    case Verdict::hypotheses_not_met: return "hypotheses-not-met";
  }
  return "?";
}

/// One evaluated inequality. `inequality` names the formula that replay_witness recomputes from (x, d, lam, w).
struct Witness {
  std::string inequality;
  Vec x, d, lam, w;
  double achieved = 0.0;
  /// Right-hand side the achieved value was compared against.
  double threshold = 0.0;
  bool passed = true;
  /// Level-set variants evaluate the solution-set objects.
  bool level_set = false;
  /// Cell index for inequalities evaluated over one cell of a K-side set.
  long element = -1;
};

/// Primal conic LP and dual multiplier LP values for one element.
struct DualityRecord {
  std::string element;
  double primal = 0.0;
  double dual = 0.0;
};

struct CqStatus {
  Vec d;
  std::string certificate;  // empty when no condition certifies MSCQ in this direction
  std::vector<CqResult> checks;
};

struct CertificationReport {
  std::string check;
  Verdict verdict = Verdict::inconclusive;
  /// Max admissible kappa for necessary checks, certified kappa for sufficient checks.
  std::optional<double> kappa_bound;
  std::vector<Witness> witnesses;
  std::vector<CqStatus> cq_status;
  std::vector<DualityRecord> duality;
  std::vector<std::string> diagnostics;
  bool strength_gap = false;

  CertificationReport& diag(std::string s) {
    diagnostics.push_back(std::move(s));
    return *this;
  }
};

namespace certify_detail {

inline double as_double(const ExtendedReal& e) { return e.value(); }

/// sup of <grad g(x)^T lam, w> over R, plus <lam, shift>.
inline double adjoint_support(const Region& r, const Mat& j, const Vec& lam, const Vec& shift) {
  const double s = as_double(support(r, j.transpose() * lam));
  if (std::isinf(s)) return s;
  return s + lam.dot(shift);
}

/// sup of <grad g^T lam, w> over R ∩ {d}^⊥ ∩ unit box: nonpositive exactly when (i) can hold.
inline double boxed_adjoint_support(const Region& r, const Mat& j, const Vec& lam) {
  Region boxed = r;
  for (auto& c : boxed.cells)
    for (long i = 0; i < r.dim; ++i) {
      c.add_ineq(linalg::unit(r.dim, i), 1.0);
      c.add_ineq(-linalg::unit(r.dim, i), 1.0);
    }
  return as_double(support(boxed, j.transpose() * lam));
}

}  // namespace certify_detail

namespace certify_detail {

/// <lam, grad g w> < 0 for every w in the cone R with grad g w != 0.
inline bool strict_image_negativity(const Region& r, const Mat& j, const Vec& lam) {
  Region z = with_ineq(r, -(j.transpose() * lam), 0.0);
  const long n = r.dim;
  for (const auto& c : z.cells) {
    PolyCell boxed = c;
    for (long i = 0; i < n; ++i) {
      boxed.ineq.push_back({linalg::unit(n, i), 1.0});
      boxed.ineq.push_back({-linalg::unit(n, i), 1.0});
    }
    for (long row = 0; row < j.rows(); ++row)
      for (double s : {1.0, -1.0}) {
        const auto out = maximize_over_cell(boxed, s * j.row(row).transpose());
        if (out.status == LpStatus::optimal && out.value.value() > 1e-9) return false;
      }
  }
  return true;
}

/// lam0 and lam0 +- each nullspace direction.
inline std::vector<Vec> affine_extremes(const MultiplierAffineSet& a) {
  std::vector<Vec> out{a.lam0};
  for (long j = 0; j < a.basis.cols(); ++j) {
    out.push_back(a.lam0 + a.basis.col(j));
    out.push_back(a.lam0 - a.basis.col(j));
  }
  return out;
}

/// lam0 plus a lattice over the nullspace: step 0.25 up to radius 4 for one or two free directions, seeded
/// samples otherwise.
inline std::vector<Vec> affine_lattice(const MultiplierAffineSet& a, unsigned long long seed) {
  std::vector<Vec> out{a.lam0};
  const long k = a.basis.cols();
  if (k == 0) return out;
  std::vector<double> ticks;
  for (int i = -16; i <= 16; ++i)
    if (i != 0) ticks.push_back(0.25 * i);
  if (k == 1) {
    for (double t : ticks) out.push_back(a.lam0 + t * a.basis.col(0));
  } else if (k == 2) {
    ticks.push_back(0.0);
    for (double s : ticks)
      for (double t : ticks)
        if (s != 0.0 || t != 0.0) out.push_back(a.lam0 + s * a.basis.col(0) + t * a.basis.col(1));
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ud(-4.0, 4.0);
    for (int i = 0; i < 2000; ++i) {
      Vec c(k);
      for (long j = 0; j < k; ++j) c(j) = ud(rng);
      out.push_back(a.lam0 + a.basis * c);
    }
  }
  return out;
}

}  // namespace certify_detail

}  // namespace sharpcheck
