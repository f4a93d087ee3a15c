#pragma once

#include <cmath>
#include <stdexcept>

#include "gns/logspace.hpp"

namespace gns {

/// log I_alpha(x) for alpha >= 0, x >= 0, via the ascending power series
///
///   I_alpha(x) = sum_k (x/2)^(2k+alpha) / (k! Gamma(k+alpha+1)),
///
/// accumulated in log space so large arguments (e.g. x ~ 100 with
/// half-integer alpha) never overflow. Terms rise to a single mode near
/// k ~ x/2 and then decay superexponentially; we stop once past the mode
/// and below the running sum by 1e-18 relative.
inline double log_bessel_i(double alpha, double x) {
  if (!(alpha >= 0.0) || !(x >= 0.0) || !std::isfinite(alpha) || !std::isfinite(x))
    throw std::domain_error("log_bessel_i: requires alpha >= 0 and finite x >= 0");
  if (x == 0.0) return alpha == 0.0 ? 0.0 : neg_inf;

  const double lh = std::log(x / 2.0);
  double sum = neg_inf;
  for (int k = 0; k < 40000; ++k) {
    const double lt = (2.0 * k + alpha) * lh - std::lgamma(k + 1.0) -
                      std::lgamma(k + alpha + 1.0);
    sum = logaddexp(sum, lt);
    // ratio of successive terms: (x/2)^2 / ((k+1)(k+alpha+1))
    const bool past_mode = (k + 1.0) * (k + 1.0 + alpha) > (x * x) / 4.0;
    if (past_mode && lt < sum + std::log(1e-18)) return sum;
  }
  throw std::runtime_error("log_bessel_i: series did not converge");
}

inline double log_bessel_i0(double x) { return log_bessel_i(0.0, x); }

}  // namespace gns
