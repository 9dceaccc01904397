#pragma once

#include <cmath>

#include "phh/errors.hpp"

namespace phh {

// Map parameters (lambda0, lambda1, beta0, sigma, beta1).
// Admissible ranges: 0 < lambda0 < 1/3, 0 < lambda1 < 1/3, beta0 > 6,
// 0 < sigma < 1/3, 3 < beta1 < 4 (all strict).
struct Params {
  double lambda0;
  double lambda1;
  double beta0;
  double sigma;
  double beta1;
};

// Default parameter vector. Any admissible values work; only sigma enters the
// central dynamics, so it is the one default that affects pressure results.
inline constexpr Params kDefaultParams{0.25, 0.25, 6.5, 0.25, 3.5};

inline Params validate_params(double lambda0, double lambda1, double beta0,
                              double sigma, double beta1) {
  auto in_open = [](double v, double lo, double hi) {
    return std::isfinite(v) && v > lo && v < hi;
  };
  if (!in_open(lambda0, 0.0, 1.0 / 3.0))
    throw ConstraintViolation("lambda0", lambda0, "0<lambda0<1/3");
  if (!in_open(lambda1, 0.0, 1.0 / 3.0))
    throw ConstraintViolation("lambda1", lambda1, "0<lambda1<1/3");
  if (!(std::isfinite(beta0) && beta0 > 6.0))
    throw ConstraintViolation("beta0", beta0, ">6");
  if (!in_open(sigma, 0.0, 1.0 / 3.0))
    throw ConstraintViolation("sigma", sigma, "<1/3");
  if (!in_open(beta1, 3.0, 4.0))
    throw ConstraintViolation("beta1", beta1, "3<beta1<4");
  return Params{lambda0, lambda1, beta0, sigma, beta1};
}

inline Params validate_params(const Params& p) {
  return validate_params(p.lambda0, p.lambda1, p.beta0, p.sigma, p.beta1);
}

}  // namespace phh
