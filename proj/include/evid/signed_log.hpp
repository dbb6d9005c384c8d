#pragma once

#include <cmath>
#include <span>
#include <stdexcept>

namespace evid {

// x = sign * exp(log_magnitude), or exactly zero. Products of many eigenvalue
// gaps stay representable here long after the plain double product has left
// the range of double.
struct SignedLogValue {
  double log_magnitude = 0.0;
  int sign = 1;
  bool is_zero = false;

  static SignedLogValue zero() { return {0.0, 1, true}; }

  static SignedLogValue of(double x) {
    if (x == 0.0) return zero();
    return {std::log(std::abs(x)), x < 0.0 ? -1 : 1, false};
  }

  SignedLogValue& operator*=(const SignedLogValue& rhs) {
    if (is_zero || rhs.is_zero) return *this = zero();
    log_magnitude += rhs.log_magnitude;
    sign *= rhs.sign;
    return *this;
  }

  SignedLogValue& operator/=(const SignedLogValue& rhs) {
    if (rhs.is_zero) throw std::domain_error("SignedLogValue division by zero");
    if (is_zero) return *this;
    log_magnitude -= rhs.log_magnitude;
    sign *= rhs.sign;
    return *this;
  }

  friend SignedLogValue operator*(SignedLogValue a, const SignedLogValue& b) { return a *= b; }
  friend SignedLogValue operator/(SignedLogValue a, const SignedLogValue& b) { return a /= b; }

  /// Plain double; overflows to ±inf or underflows to ±0 outside double range.
  double value() const {
    if (is_zero) return 0.0;
    return sign * std::exp(log_magnitude);
  }
};

/// Product of `gaps` in signed log space. Any exact zero gives an exact zero;
/// the empty product is 1.
inline SignedLogValue signed_log_product(std::span<const double> gaps) {
  SignedLogValue acc;
  for (double g : gaps) {
    if (g == 0.0) return SignedLogValue::zero();
    acc.log_magnitude += std::log(std::abs(g));
    if (g < 0.0) acc.sign = -acc.sign;
  }
  return acc;
}

}  // namespace evid
