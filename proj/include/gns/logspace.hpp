#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

namespace gns {

inline constexpr double neg_inf = -std::numeric_limits<double>::infinity();

/// log(exp(a) + exp(b)) without leaving log space.
inline double logaddexp(double a, double b) {
  if (a == neg_inf) return b;
  if (b == neg_inf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

/// log(sum_i exp(x_i)); -inf for an empty range.
inline double logsumexp(std::span<const double> xs) {
  double m = neg_inf;
  for (double x : xs) m = std::max(m, x);
  if (m == neg_inf || std::isinf(m)) return m;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - m);
  return m + std::log(s);
}

inline double logmeanexp(std::span<const double> xs) {
  return logsumexp(xs) - std::log(static_cast<double>(xs.size()));
}

/// log(1 - exp(-d)) for d > 0.
inline double log1mexp(double d) { return std::log(-std::expm1(-d)); }

}  // namespace gns
