#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

namespace sharpcheck {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

namespace linalg {

inline constexpr double kRankTol = 1e-10;

/// Stacks row vectors into a matrix with `cols` columns.
inline Mat stack_rows(const std::vector<Vec>& rows, long cols) {
  Mat m(static_cast<long>(rows.size()), cols);
  for (long i = 0; i < m.rows(); ++i) m.row(i) = rows[static_cast<size_t>(i)].transpose();
  return m;
}

/// Orthonormal basis (as columns) of the kernel of `a`; `a` may have zero rows.
inline Mat nullspace(const Mat& a, double tol = kRankTol) {
  const long n = a.cols();
  if (a.rows() == 0) return Mat::Identity(n, n);
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double scale = std::max(1.0, s.size() > 0 ? s(0) : 0.0);
  long rank = 0;
  for (long i = 0; i < s.size(); ++i) {
    if (s(i) > tol * scale) ++rank;
  }
  return svd.matrixV().rightCols(n - rank);
}

/// Orthonormal basis (columns) of the span of the rows of `a`.
inline Mat rowspace(const Mat& a, double tol = kRankTol) {
  const long n = a.cols();
  if (a.rows() == 0) return Mat(n, 0);
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double scale = std::max(1.0, s.size() > 0 ? s(0) : 0.0);
  long rank = 0;
  for (long i = 0; i < s.size(); ++i) {
    if (s(i) > tol * scale) ++rank;
  }
  return svd.matrixV().leftCols(rank);
}

inline long rank(const Mat& a, double tol = kRankTol) {
  if (a.rows() == 0 || a.cols() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(a);
  const auto& s = svd.singularValues();
  const double scale = std::max(1.0, s(0));
  long r = 0;
  for (long i = 0; i < s.size(); ++i) {
    if (s(i) > tol * scale) ++r;
  }
  return r;
}

inline Vec unit(long n, long i) {
  Vec e = Vec::Zero(n);
  e(i) = 1.0;
  return e;
}

/// Normalizes to unit Euclidean length; zero stays zero.
inline Vec normalized(const Vec& v) {
  const double nrm = v.norm();
  return nrm > 0 ? Vec(v / nrm) : v;
}

inline Vec concat(const Vec& a, const Vec& b) {
  Vec out(a.size() + b.size());
  out << a, b;
  return out;
}

}  // namespace linalg
}  // namespace sharpcheck
