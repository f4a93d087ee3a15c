#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "gns/geometry.hpp"
#include "gns/logspace.hpp"
#include "gns/special.hpp"

namespace gns {

// --- priors -----------------------------------------------------------------

struct UniformPrior {
  double lo, hi;
};

/// Density pi/(2(hi-lo)) * sin(pi (t-lo)/(hi-lo)) on [lo, hi]; integrates
/// to one.  On [0, pi] this is sin(theta)/2, the zenith factor of the
/// uniform-on-the-sphere measure.
struct SinusoidalPrior {
  double lo, hi;
};

using PriorDim = std::variant<UniformPrior, SinusoidalPrior>;

inline Bounds prior_bounds(const PriorDim& p) {
  if (const auto* u = std::get_if<UniformPrior>(&p)) return {u->lo, u->hi};
  const auto& s = std::get<SinusoidalPrior>(p);
  return {s.lo, s.hi};
}

inline void validate_prior(const PriorDim& p) {
  const Bounds b = prior_bounds(p);
  if (!std::isfinite(b.lo) || !std::isfinite(b.hi) || !(b.lo < b.hi))
    throw std::invalid_argument("prior: requires finite lo < hi");
}

inline double log_prior_dim(const PriorDim& p, double t) {
  if (const auto* u = std::get_if<UniformPrior>(&p)) {
    if (t < u->lo || t > u->hi) return neg_inf;
    return -std::log(u->hi - u->lo);
  }
  const auto& s = std::get<SinusoidalPrior>(p);
  if (t < s.lo || t > s.hi) return neg_inf;
  const double w = s.hi - s.lo;
  const double sv = std::sin(pi * (t - s.lo) / w);
  if (sv <= 0.0) return neg_inf;  // endpoints of the support
  return std::log(pi / (2.0 * w)) + std::log(sv);
}

/// Joint log prior density; -inf outside the support.
inline double log_prior_density(std::span<const PriorDim> prior,
                                std::span<const double> theta) {
  if (prior.size() != theta.size())
    throw std::invalid_argument("log_prior_density: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < prior.size(); ++i) {
    const double li = log_prior_dim(prior[i], theta[i]);
    if (li == neg_inf) return neg_inf;
    s += li;
  }
  return s;
}

/// Map a uniform deviate u in [0,1) through the prior's inverse CDF.
inline double prior_inverse_cdf(const PriorDim& p, double u) {
  if (const auto* uni = std::get_if<UniformPrior>(&p))
    return uni->lo + u * (uni->hi - uni->lo);
  const auto& s = std::get<SinusoidalPrior>(p);
  // CDF(t) = (1 - cos(pi (t-lo)/w)) / 2  =>  t = lo + (w/pi) acos(1 - 2u)
  return s.lo + (s.hi - s.lo) / pi * std::acos(1.0 - 2.0 * u);
}

// --- von Mises / torus --------------------------------------------------------

struct VonMisesParams {
  double mu = 0.0;      // with the built-in offset below, mu = 0 peaks at phi = pi
  double sigma2 = 0.25;
};

/// log f(phi) = cos(phi - pi - mu)/sigma2 - log(2 pi I0(1/sigma2)).
/// Note the built-in -pi offset: the density peaks at phi = mu + pi, so the
/// canonical mu = 0 puts the mode at the centre of [0, 2 pi).  To demo a peak
/// on the wrap point itself, use mu = pi.
inline double log_von_mises(double phi, const VonMisesParams& p) {
  if (!(p.sigma2 > 0.0) || !std::isfinite(p.sigma2) || !std::isfinite(p.mu))
    throw std::domain_error("log_von_mises: requires finite mu and sigma2 > 0");
  const double k = 1.0 / p.sigma2;
  // memoize the normalization: samplers evaluate the same concentration
  // millions of times
  thread_local double k_cached = -1.0, log_i0_cached = 0.0;
  if (k != k_cached) {
    log_i0_cached = log_bessel_i0(k);
    k_cached = k;
  }
  return std::cos(phi - pi - p.mu) * k - std::log(two_pi) - log_i0_cached;
}

/// Independent von Mises factors, one per angle.
inline double log_torus(std::span<const double> thetas,
                        std::span<const VonMisesParams> params) {
  if (thetas.size() != params.size())
    throw std::invalid_argument("log_torus: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < thetas.size(); ++i) s += log_von_mises(thetas[i], params[i]);
  return s;
}

// --- Kent (Fisher-Bingham FB5) ------------------------------------------------

/// log of the Kent normalization
///   c(kappa, beta) = 2 pi sum_{i>=0} G(i+1/2)/G(i+1) beta^(2i)
///                    (kappa/2)^(-2i-1/2) I_{2i+1/2}(kappa),
/// summed in log space until the relative term drops below 1e-15 (cap 200
/// terms).  Requires kappa > 0 and 0 <= 2 beta <= kappa (the oblate regimes
/// where the series is a plain positive sum).
inline double kent_log_norm(double kappa, double beta) {
  if (!(kappa > 0.0) || !std::isfinite(kappa))
    throw std::domain_error("kent_log_norm: requires kappa > 0");
  if (!(beta >= 0.0) || !(2.0 * beta <= kappa))
    throw std::domain_error("kent_log_norm: requires 0 <= 2 beta <= kappa");
  const double l2pi = std::log(two_pi);
  const double lhk = std::log(kappa / 2.0);
  const double lbeta = beta > 0.0 ? std::log(beta) : neg_inf;
  double sum = neg_inf;
  for (int i = 0; i < 200; ++i) {
    double lt = l2pi + std::lgamma(i + 0.5) - std::lgamma(i + 1.0) -
                (2.0 * i + 0.5) * lhk + log_bessel_i(2.0 * i + 0.5, kappa);
    if (i > 0) {
      if (beta == 0.0) return sum;  // single-term series
      lt += 2.0 * i * lbeta;
    }
    sum = logaddexp(sum, lt);
    if (i > 0 && lt < sum + std::log(1e-15)) return sum;
  }
  throw std::runtime_error("kent_log_norm: series did not converge in 200 terms");
}

/// Kent density parameters: concentration kappa, ovalness beta, and the
/// orthonormal frame (g1 = mean direction, g2 = major axis, g3 = minor axis).
/// The normalization is computed once on construction.
class KentParams {
 public:
  KentParams(double kappa, double beta, const UnitVector3& g1, const UnitVector3& g2,
             const UnitVector3& g3)
      : kappa_(kappa), beta_(beta), g1_(g1), g2_(g2), g3_(g3) {
    const double tol = 1e-12;
    const auto unit = [&](const UnitVector3& v) { return std::abs(v.norm() - 1.0) <= tol; };
    if (!unit(g1) || !unit(g2) || !unit(g3) || std::abs(g1.dot(g2)) > tol ||
        std::abs(g1.dot(g3)) > tol || std::abs(g2.dot(g3)) > tol)
      throw std::invalid_argument("KentParams: frame is not orthonormal");
    log_norm_ = kent_log_norm(kappa, beta);
  }

  double kappa() const { return kappa_; }
  double beta() const { return beta_; }
  const UnitVector3& g1() const { return g1_; }
  const UnitVector3& g2() const { return g2_; }
  const UnitVector3& g3() const { return g3_; }
  double log_norm() const { return log_norm_; }

 private:
  double kappa_, beta_;
  UnitVector3 g1_, g2_, g3_;
  double log_norm_ = 0.0;
};

/// log f(x) = kappa g1.x + beta ((g2.x)^2 - (g3.x)^2) - log c(kappa, beta)
/// for a unit vector x.
inline double log_kent(const UnitVector3& x, const KentParams& p) {
  const double d2 = p.g2().dot(x), d3 = p.g3().dot(x);
  return p.kappa() * p.g1().dot(x) + p.beta() * (d2 * d2 - d3 * d3) - p.log_norm();
}

/// Sum of Kent component densities evaluated at (phi, theta):
/// log( sum_k f_k(x) ) with x = sph_to_cart(phi, theta).  With K normalized
/// components this integrates to K over the sphere.
inline double log_flower(double phi, double theta, std::span<const KentParams> comps) {
  if (comps.empty()) throw std::invalid_argument("log_flower: no components");
  const UnitVector3 x = sph_to_cart(phi, theta);
  double s = neg_inf;
  for (const KentParams& p : comps) s = logaddexp(s, log_kent(x, p));
  return s;
}

/// The canonical four-component flower: all mean directions at the north
/// pole, major axes rotated so the 2K = 8 petals sit at phi = k pi/4,
/// kappa = 100, beta = 50 (flat-ridge case kappa = 2 beta).
inline std::vector<KentParams> flower_components() {
  const double s2 = 1.0 / std::sqrt(2.0);
  const UnitVector3 up{0.0, 0.0, 1.0};
  const std::array<UnitVector3, 4> majors{
      UnitVector3{0.0, 1.0, 0.0},
      UnitVector3{1.0, 0.0, 0.0},
      UnitVector3{-s2, s2, 0.0},
      UnitVector3{s2, s2, 0.0},
  };
  std::vector<KentParams> out;
  out.reserve(4);
  for (const UnitVector3& m : majors) {
    // g3 = g1 x g2 keeps the frame right-handed
    const UnitVector3 minor{up.y * m.z - up.z * m.y, up.z * m.x - up.x * m.z,
                            up.x * m.y - up.y * m.x};
    out.emplace_back(100.0, 50.0, up, m, minor);
  }
  return out;
}

// --- model ----------------------------------------------------------------------

/// A target for the sampler: geometry, factorized prior, and a log likelihood
/// that must be finite everywhere the prior is positive.
struct Model {
  std::string name;
  ParameterSpace space;
  std::vector<PriorDim> prior;
  std::function<double(std::span<const double>)> log_likelihood;

  double loglike(std::span<const double> theta) const { return log_likelihood(theta); }
};

}  // namespace gns
