#pragma once

#include <cmath>
#include <compare>
#include <limits>
#include <ostream>

#include "sharpcheck/error.hpp"

namespace sharpcheck {

/// A real number or one of the two infinities. NaN is never representable.
class ExtendedReal {
 public:
  constexpr ExtendedReal() = default;

  static ExtendedReal finite(double v) {
    if (!std::isfinite(v)) throw DomainError("ExtendedReal::finite given a non-finite value");
    return ExtendedReal(v);
  }
  static constexpr ExtendedReal pos_inf() { return ExtendedReal(std::numeric_limits<double>::infinity()); }
  static constexpr ExtendedReal neg_inf() { return ExtendedReal(-std::numeric_limits<double>::infinity()); }
  /// Accepts +-inf, rejects NaN.
  static ExtendedReal from_double(double v) {
    if (std::isnan(v)) throw DomainError("ExtendedReal from NaN");
    return ExtendedReal(v);
  }

  [[nodiscard]] bool is_finite() const { return std::isfinite(value_); }
  [[nodiscard]] bool is_pos_inf() const { return value_ == std::numeric_limits<double>::infinity(); }
  [[nodiscard]] bool is_neg_inf() const { return value_ == -std::numeric_limits<double>::infinity(); }
  /// The finite value, or +-inf as an IEEE double.
  [[nodiscard]] constexpr double value() const { return value_; }

  friend constexpr auto operator<=>(const ExtendedReal& a, const ExtendedReal& b) {
    // never NaN, so the order is total
    if (a.value_ < b.value_) return std::strong_ordering::less;
    if (a.value_ > b.value_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }
  friend constexpr bool operator==(const ExtendedReal& a, const ExtendedReal& b) { return a.value_ == b.value_; }

  friend ExtendedReal operator+(const ExtendedReal& a, const ExtendedReal& b) {
    if ((a.is_pos_inf() && b.is_neg_inf()) || (a.is_neg_inf() && b.is_pos_inf())) {
      throw DomainError("ExtendedReal: +inf + -inf is undefined");
    }
    return ExtendedReal(a.value_ + b.value_);
  }
  friend ExtendedReal operator-(const ExtendedReal& a) { return ExtendedReal(-a.value_); }
  friend ExtendedReal operator-(const ExtendedReal& a, const ExtendedReal& b) { return a + (-b); }

  friend std::ostream& operator<<(std::ostream& os, const ExtendedReal& x) {
    if (x.is_pos_inf()) return os << "+inf";
    if (x.is_neg_inf()) return os << "-inf";
    return os << x.value_;
  }

 private:
  constexpr explicit ExtendedReal(double v) : value_(v) {}
  double value_ = 0.0;
};

inline ExtendedReal min(const ExtendedReal& a, const ExtendedReal& b) { return b < a ? b : a; }
inline ExtendedReal max(const ExtendedReal& a, const ExtendedReal& b) { return a < b ? b : a; }

}  // namespace sharpcheck
