#pragma once

#include <cstdint>
#include <string>

#include "srta/error.hpp"

namespace srta {

namespace detail {

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r))
    throw overflow_error("coefficient addition overflows");
  return r;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r))
    throw overflow_error("coefficient multiplication overflows");
  return r;
}

}  // namespace detail

/// Exact rational coefficient with denominator 4, stored as an integer
/// count of quarter-units. Every value in the pipeline is q/4 for some
/// integer q, so a fixed denominator gives exact arithmetic; operations
/// that would leave this domain (inexact division, overflow) throw.
class Coeff {
 public:
  constexpr Coeff() = default;

  static Coeff from_int(std::int64_t v) {
    return Coeff(detail::checked_mul(v, 4));
  }
  static Coeff from_half_units(std::int64_t h) {
    return Coeff(detail::checked_mul(h, 2));
  }
  static Coeff from_quarter_units(std::int64_t q) { return Coeff(q); }

  std::int64_t quarter_units() const { return q_; }
  bool is_zero() const { return q_ == 0; }
  bool is_integer() const { return q_ % 4 == 0; }

  std::int64_t to_int() const {
    if (!is_integer()) throw overflow_error("coefficient is not an integer: " + str());
    return q_ / 4;
  }
  double to_double() const { return static_cast<double>(q_) / 4.0; }

  Coeff operator-() const { return Coeff(detail::checked_mul(q_, -1)); }
  Coeff abs() const { return q_ < 0 ? -*this : *this; }

  Coeff& operator+=(Coeff o) {
    q_ = detail::checked_add(q_, o.q_);
    return *this;
  }
  Coeff& operator-=(Coeff o) { return *this += -o; }

  friend Coeff operator+(Coeff a, Coeff b) { return a += b; }
  friend Coeff operator-(Coeff a, Coeff b) { return a -= b; }

  /// Scale by an integer factor (spins, binary values, squared coefficients).
  Coeff times(std::int64_t k) const { return Coeff(detail::checked_mul(q_, k)); }

  /// Exact division by 2; throws if the result leaves quarter-units.
  Coeff half() const {
    if (q_ % 2 != 0) throw overflow_error("inexact division by 2: " + str());
    return Coeff(q_ / 2);
  }
  /// Exact division by 4.
  Coeff quarter() const {
    if (q_ % 4 != 0) throw overflow_error("inexact division by 4: " + str());
    return Coeff(q_ / 4);
  }
  /// Exact division by an arbitrary nonzero integer.
  Coeff divided_by(std::int64_t k) const {
    if (k == 0) throw overflow_error("division by zero");
    if (q_ % k != 0) throw overflow_error("inexact division: " + str());
    return Coeff(q_ / k);
  }

  friend bool operator==(Coeff a, Coeff b) { return a.q_ == b.q_; }
  friend bool operator!=(Coeff a, Coeff b) { return a.q_ != b.q_; }
  friend bool operator<(Coeff a, Coeff b) { return a.q_ < b.q_; }
  friend bool operator<=(Coeff a, Coeff b) { return a.q_ <= b.q_; }
  friend bool operator>(Coeff a, Coeff b) { return a.q_ > b.q_; }
  friend bool operator>=(Coeff a, Coeff b) { return a.q_ >= b.q_; }

  /// Reduced fraction, e.g. "3", "-1/2", "5/4".
  std::string str() const {
    if (q_ % 4 == 0) return std::to_string(q_ / 4);
    if (q_ % 2 == 0) return std::to_string(q_ / 2) + "/2";
    return std::to_string(q_) + "/4";
  }

 private:
  explicit constexpr Coeff(std::int64_t q) : q_(q) {}
  std::int64_t q_ = 0;
};

}  // namespace srta
