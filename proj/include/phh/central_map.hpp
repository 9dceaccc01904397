#pragma once

#include <cmath>

#include "phh/errors.hpp"

namespace phh {

// Central map f: time-one map of the central vector field, evaluated through
// its closed form  f^n(y) = y / (y + (1-y) e^-n).
// Fixed points f(0)=0, f(1)=1; f'(0)=e, f'(1)=1/e; f strictly increasing.

namespace detail {

// Split representation of y in [0,1]: carries y and 1-y so that points
// exponentially close to either endpoint keep full relative precision.
// Invariant: y + omy == 1 (up to construction rounding), both in [0,1].
struct YPair {
  double y;
  double omy;
};

inline YPair ypair(double y) { return {y, 1.0 - y}; }
inline YPair ypair_from_omy(double omy) { return {1.0 - omy, omy}; }

// f^n on the split representation; n may be any nonnegative real.
inline YPair f0_pow(YPair p, double n) {
  if (p.y == 0.0) return {0.0, 1.0};
  if (p.omy == 0.0) return {1.0, 0.0};
  const double q = std::exp(-n);
  const double den = p.y + p.omy * q;
  return {p.y / den, p.omy * q / den};
}

// log f'(y) = -1 - 2 log(y + (1-y)/e); with y+omy = 1 the argument is
// 1 - omy (1 - 1/e), exact at both endpoints (gives +1 at y=0, -1 at y=1).
inline double log_fprime(YPair p) {
  constexpr double kOneMinusInvE = 1.0 - 0.36787944117144232159553;
  return -1.0 - 2.0 * std::log1p(-p.omy * kOneMinusInvE);
}

inline void check_unit_interval(double y) {
  if (!(y >= 0.0 && y <= 1.0)) throw DomainError("y outside [0,1]");
}

}  // namespace detail

// n-th iterate of the central map. y=0 and y=1 are exact fixed points, n=0 is
// the identity.
inline double f_iter(double y, long n) {
  detail::check_unit_interval(y);
  if (n < 0) throw DomainError("n must be nonnegative");
  if (n == 0) return y;
  return detail::f0_pow(detail::ypair(y), static_cast<double>(n)).y;
}

// log of (f^n)'(y) = -n - 2 log(y + (1-y) e^-n); valid on (0,1], and at y=0
// returns the continuous-extension value n (i.e. (f^n)'(0) = e^n).
inline double log_df_iter(double y, long n) {
  detail::check_unit_interval(y);
  if (n < 1) throw DomainError("n must be positive");
  const double nn = static_cast<double>(n);
  if (y == 0.0) return nn;
  const double q = std::exp(-nn);
  return -nn - 2.0 * std::log(y + (1.0 - y) * q);
}

// Derivative of the n-th iterate at y in (0,1], strictly positive. The
// continuous extension to y=0 (value e^n) is exposed behind extend_to_zero.
inline double df_iter(double y, long n, bool extend_to_zero = false) {
  detail::check_unit_interval(y);
  if (n < 1) throw DomainError("n must be positive");
  if (y == 0.0 && !extend_to_zero)
    throw DomainError("df_iter: y=0 outside (0,1]; use extend_to_zero");
  return std::exp(log_df_iter(y, n));
}

}  // namespace phh
