#pragma once

#include <cctype>
#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "sharpcheck/error.hpp"
#include "sharpcheck/linalg.hpp"

namespace sharpcheck {

/// Sparse polynomial in x1..xn: exponent vector -> coefficient.
class Polynomial {
 public:
  using Exponents = std::vector<int>;

  Polynomial() = default;
  explicit Polynomial(long n) : n_(n) {}

  static Polynomial constant(long n, double c) {
    Polynomial p(n);
    if (c != 0.0) p.terms_[Exponents(static_cast<size_t>(n), 0)] = c;
    return p;
  }
  static Polynomial variable(long n, long i) {
    Polynomial p(n);
    Exponents e(static_cast<size_t>(n), 0);
    e[static_cast<size_t>(i)] = 1;
    p.terms_[e] = 1.0;
    return p;
  }

  [[nodiscard]] long vars() const { return n_; }
  [[nodiscard]] const std::map<Exponents, double>& terms() const { return terms_; }

  [[nodiscard]] int degree() const {
    int d = 0;
    for (const auto& [e, c] : terms_) {
      int s = 0;
      for (int k : e) s += k;
      d = std::max(d, s);
    }
    return d;
  }

  Polynomial operator+(const Polynomial& o) const {
    require_dim(o.n_, n_, "polynomial sum");
    Polynomial r = *this;
    for (const auto& [e, c] : o.terms_) r.add_term(e, c);
    return r;
  }
  Polynomial operator-() const {
    Polynomial r = *this;
    for (auto& [e, c] : r.terms_) c = -c;
    return r;
  }
  Polynomial operator-(const Polynomial& o) const { return *this + (-o); }
  Polynomial operator*(const Polynomial& o) const {
    require_dim(o.n_, n_, "polynomial product");
    Polynomial r(n_);
    for (const auto& [a, ca] : terms_)
      for (const auto& [b, cb] : o.terms_) {
        Exponents e(a.size());
        for (size_t i = 0; i < a.size(); ++i) e[i] = a[i] + b[i];
        r.add_term(e, ca * cb);
      }
    return r;
  }
  [[nodiscard]] Polynomial pow(int k) const {
    Polynomial r = constant(n_, 1.0), base = *this;
    while (k > 0) {
      if (k & 1) r = r * base;
      base = base * base;
      k >>= 1;
    }
    return r;
  }

  [[nodiscard]] double value(const Vec& x) const {
    require_dim(x.size(), n_, "polynomial argument");
    double s = 0.0;
    for (const auto& [e, c] : terms_) s += c * monomial(e, x, -1, -1);
    return s;
  }
  [[nodiscard]] Vec gradient(const Vec& x) const {
    require_dim(x.size(), n_, "polynomial argument");
    Vec g = Vec::Zero(n_);
    for (const auto& [e, c] : terms_)
      for (long i = 0; i < n_; ++i) g(i) += c * monomial(e, x, i, -1);
    return g;
  }
  [[nodiscard]] Mat hessian(const Vec& x) const {
    require_dim(x.size(), n_, "polynomial argument");
    Mat h = Mat::Zero(n_, n_);
    for (const auto& [e, c] : terms_)
      for (long i = 0; i < n_; ++i)
        for (long j = i; j < n_; ++j) {
          const double v = c * monomial(e, x, i, j);
          h(i, j) += v;
          if (j != i) h(j, i) += v;
        }
    return h;
  }

  /// Affine iff the degree is at most 1.
  [[nodiscard]] bool affine() const { return degree() <= 1; }

 private:
  void add_term(const Exponents& e, double c) {
    auto it = terms_.find(e);
    if (it == terms_.end()) {
      if (c != 0.0) terms_.emplace(e, c);
      return;
    }
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }

  /// Monomial x^e differentiated by d/dx_i (i >= 0) and then d/dx_j (j >= 0).
  static double monomial(const Exponents& e, const Vec& x, long i, long j) {
    double coef = 1.0;
    Exponents k = e;
    for (long v : {i, j}) {
      if (v < 0) continue;
      auto& p = k[static_cast<size_t>(v)];
      if (p == 0) return 0.0;
      coef *= p;
      --p;
    }
    double s = coef;
    for (size_t t = 0; t < k.size(); ++t)
      if (k[t] > 0) s *= std::pow(x(static_cast<long>(t)), k[t]);
    return s;
  }

  long n_ = 0;
  std::map<Exponents, double> terms_;
};

namespace poly_detail {

class Parser {
 public:
  Parser(const std::string& text, long n) : s_(text), n_(n) {}

  Polynomial parse() {
    Polynomial p = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw InputError("expression error at position " + std::to_string(pos_ + 1) + ": " + what);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Polynomial expr() {
    Polynomial p = term();
    while (true) {
      if (eat('+'))
        p = p + term();
      else if (eat('-'))
        p = p - term();
      else
        return p;
    }
  }
  Polynomial term() {
    Polynomial p = factor();
    while (eat('*')) p = p * factor();
    return p;
  }
  Polynomial factor() {
    Polynomial b = base();
    if (eat('^')) b = b.pow(exponent());
    return b;
  }

  double number() {
    skip();
    const size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    if (pos_ == start || (pos_ == start + 1 && s_[start] == '.')) fail("expected a number");
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      size_t q = pos_ + 1;
      if (q < s_.size() && (s_[q] == '+' || s_[q] == '-')) ++q;
      if (q < s_.size() && std::isdigit(static_cast<unsigned char>(s_[q]))) {
        pos_ = q;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      }
    }
    return std::stod(s_.substr(start, pos_ - start));
  }

  /// Accepts "k", "(k)", and reports fractional or negative forms such as "(1/2)" or "-1".
  int exponent() {
    bool paren = eat('(');
    bool neg = eat('-');
    double v = number();
    if (paren && eat('/')) {
      const double den = number();
      if (den == 0.0) fail("zero denominator in exponent");
      v /= den;
    }
    if (paren && !eat(')')) fail("expected ')'");
    if (neg && v != 0.0) fail("negative exponent");
    if (v != std::floor(v)) fail("fractional exponent");
    if (v > 64) fail("exponent too large");
    return static_cast<int>(v);
  }

  Polynomial base() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Polynomial p = expr();
      if (!eat(')')) fail("expected ')'");
      return p;
    }
    if (c == '-') {
      ++pos_;
      return -base();
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return Polynomial::constant(n_, number());
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const size_t start = pos_;
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      const std::string id = s_.substr(start, pos_ - start);
      if (id.size() >= 2 && id[0] == 'x' && id.find_first_not_of("0123456789", 1) == std::string::npos &&
          id[1] != '0') {
        const long k = std::stol(id.substr(1));
        if (k >= 1 && k <= n_) return Polynomial::variable(n_, k - 1);
      }
      pos_ = start;
      fail("unknown identifier '" + id + "'");
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  const std::string& s_;
  long n_;
  size_t pos_ = 0;
};

}  // namespace poly_detail

inline Polynomial parse_expression(const std::string& text, long n) { return poly_detail::Parser(text, n).parse(); }

/// Values, Jacobian (rows = components) and component Hessians.
struct Jet2 {
  Vec value;
  Mat jacobian;
  std::vector<Mat> hessians;

  /// sum_i c_i * Hessian_i
  [[nodiscard]] Mat weighted_hessian(const Vec& c) const {
    require_dim(c.size(), static_cast<long>(hessians.size()), "hessian weights");
    Mat h = Mat::Zero(jacobian.cols(), jacobian.cols());
    for (size_t i = 0; i < hessians.size(); ++i) h += c(static_cast<long>(i)) * hessians[i];
    return h;
  }
  /// (d' H_i d)_i
  [[nodiscard]] Vec second(const Vec& d) const {
    Vec out(static_cast<long>(hessians.size()));
    for (size_t i = 0; i < hessians.size(); ++i) out(static_cast<long>(i)) = d.dot(hessians[i] * d);
    return out;
  }
};

inline Jet2 evaluate_jet(const std::vector<Polynomial>& ps, const Vec& x) {
  Jet2 j;
  const long m = static_cast<long>(ps.size());
  j.value = Vec(m);
  j.jacobian = Mat(m, x.size());
  for (long i = 0; i < m; ++i) {
    const auto& p = ps[static_cast<size_t>(i)];
    j.value(i) = p.value(x);
    j.jacobian.row(i) = p.gradient(x).transpose();
    j.hessians.push_back(p.hessian(x));
  }
  return j;
}

inline Jet2 evaluate_jet(const Polynomial& p, const Vec& x) { return evaluate_jet(std::vector<Polynomial>{p}, x); }

struct DerivativeReport {
  bool pass = true;
  double max_error = 0.0;
  std::vector<std::string> failures;
};

/// Compares a jet against central differences (step 1e-5) of the values and gradients.
inline DerivativeReport derivative_check(const std::function<Jet2(const Vec&)>& jet, const Vec& x,
                                         double tolerance = 1e-6) {
  constexpr double h = 1e-5;
  DerivativeReport rep;
  const Jet2 j0 = jet(x);
  const long n = x.size();
  auto check = [&](double analytic, double numeric, const std::string& where) {
    const double err = std::abs(analytic - numeric) / std::max({1.0, std::abs(analytic), std::abs(numeric)});
    rep.max_error = std::max(rep.max_error, err);
    if (err > tolerance) {
      rep.pass = false;
      rep.failures.push_back(where + ": analytic " + std::to_string(analytic) + " vs numeric " +
                             std::to_string(numeric));
    }
  };
  for (long k = 0; k < n; ++k) {
    Vec xp = x, xm = x;
    xp(k) += h;
    xm(k) -= h;
    const Jet2 jp = jet(xp), jm = jet(xm);
    for (long i = 0; i < j0.value.size(); ++i) {
      check(j0.jacobian(i, k), (jp.value(i) - jm.value(i)) / (2 * h),
            "jacobian(" + std::to_string(i) + "," + std::to_string(k) + ")");
      for (long l = 0; l < n; ++l)
        check(j0.hessians[static_cast<size_t>(i)](l, k), (jp.jacobian(i, l) - jm.jacobian(i, l)) / (2 * h),
              "hessian" + std::to_string(i) + "(" + std::to_string(l) + "," + std::to_string(k) + ")");
    }
  }
  return rep;
}

inline DerivativeReport derivative_check(const std::vector<Polynomial>& ps, const Vec& x, double tolerance = 1e-6) {
  return derivative_check([&](const Vec& z) { return evaluate_jet(ps, z); }, x, tolerance);
}

}  // namespace sharpcheck
