#pragma once

#include <cmath>
#include <cstddef>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "gns/distributions.hpp"
#include "gns/errors.hpp"
#include "gns/geometry.hpp"
#include "gns/livepoints.hpp"
#include "gns/logspace.hpp"
#include "gns/rng.hpp"

namespace gns {

enum class SamplerMode { vanilla, geometric };

struct ProposalConfig {
  SamplerMode mode = SamplerMode::geometric;
  int nt_multiplier = 20;          // chain length = nt_multiplier * N
  double sigma_cart2 = 0.04;       // per-axis variance of the sphere-pair step
  double linear_sigma_scale = 0.1; // sigma = scale * livepoint range, per dim
  bool adapt_vanilla_sigma = true; // scale sigma by e^(1/Na) / e^(-1/Nr) per chain

  void check() const {
    if (nt_multiplier < 1) throw std::invalid_argument("ProposalConfig: nt_multiplier >= 1");
    if (!(sigma_cart2 > 0.0)) throw std::invalid_argument("ProposalConfig: sigma_cart2 > 0");
  }
};

struct ChainOutcome {
  std::vector<double> new_point;
  double new_loglike = 0.0;
  int n_accepted = 0;
  int n_rejected = 0;
};

/// Mutable sampler state that survives across chains: the vanilla-mode
/// step-size multiplier (geometric mode keeps its variances fixed).
struct SamplerState {
  double vanilla_sigma_scale = 1.0;
};

/// Per-dimension trial standard deviations.  Geometric mode: sphere-pair
/// dimensions get the fixed Cartesian sigma (their steps are taken in the
/// embedding space, where the variance is pinned to keep the kernel
/// symmetric); every other dimension gets scale * (livepoint range), floored
/// at 1e-3 * (prior width) when the range degenerates to zero.  Vanilla mode
/// applies the range rule to every dimension.
inline std::vector<double> trial_sigma_per_dim(const LivePointSet& live,
                                               const ParameterSpace& space,
                                               const ProposalConfig& cfg) {
  if (live.points.empty()) throw std::invalid_argument("trial_sigma_per_dim: no livepoints");
  const std::size_t n_dims = space.size();
  std::vector<double> sigmas(n_dims, 0.0);
  for (std::size_t d = 0; d < n_dims; ++d) {
    if (cfg.mode == SamplerMode::geometric && space.is_sphere_dim(d)) {
      sigmas[d] = std::sqrt(cfg.sigma_cart2);
      continue;
    }
    double lo = live.points[0][d], hi = lo;
    for (const auto& p : live.points) {
      lo = std::min(lo, p[d]);
      hi = std::max(hi, p[d]);
    }
    double s = cfg.linear_sigma_scale * (hi - lo);
    if (s == 0.0) {
      const Bounds b = space.bounds(d);
      s = 1e-3 * (b.hi - b.lo);
    }
    sigmas[d] = s;
  }
  return sigmas;
}

/// One full-dimensional geometric trial move. Linear dims take a plain
/// Gaussian step; circular dims wrap the step back into [lo, hi); each
/// sphere pair is perturbed once, jointly: embed (phi, theta) in R^3,
/// add an isotropic Gaussian (sigma taken from the pair's entries of
/// `sigmas`, which hold the Cartesian sigma), and project back to the
/// sphere via cart_to_sph.  A trial that lands exactly on the origin has
/// no direction; the pair draw is retried (bounded).
inline std::vector<double> propose(std::span<const double> current,
                                   std::span<const double> sigmas,
                                   const ParameterSpace& space, std::mt19937_64& rng) {
  if (current.size() != space.size() || sigmas.size() != space.size())
    throw std::invalid_argument("propose: dimension mismatch");
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> out(current.begin(), current.end());
  for (std::size_t d = 0; d < space.size(); ++d) {
    const DimensionKind& kind = space.dim(d);
    if (const auto* lin = std::get_if<LinearDim>(&kind)) {
      (void)lin;
      out[d] = current[d] + sigmas[d] * gauss(rng);
    } else if (const auto* cir = std::get_if<CircularDim>(&kind)) {
      out[d] = wrap(current[d] + sigmas[d] * gauss(rng), cir->lo, cir->hi);
    } else {
      // sphere pair: handled once, at the lower index of the pair
      std::size_t partner = 0;
      bool d_is_azimuth = false;
      if (const auto* az = std::get_if<SphereAzimuthDim>(&kind)) {
        partner = az->partner;
        d_is_azimuth = true;
      } else {
        partner = std::get<SphereZenithDim>(kind).partner;
      }
      if (partner < d) continue;
      const double phi = d_is_azimuth ? current[d] : current[partner];
      const double theta = d_is_azimuth ? current[partner] : current[d];
      const UnitVector3 v = sph_to_cart(phi, theta);
      const double s = sigmas[d];
      SpherePoint moved;
      bool ok = false;
      for (int attempt = 0; attempt < 100; ++attempt) {
        const double x = v.x + s * gauss(rng);
        const double y = v.y + s * gauss(rng);
        const double z = v.z + s * gauss(rng);
        if (x == 0.0 && y == 0.0 && z == 0.0) continue;
        moved = cart_to_sph(x, y, z);
        ok = true;
        break;
      }
      if (!ok) throw std::runtime_error("propose: sphere trial degenerate 100 times");
      out[d_is_azimuth ? d : partner] = moved.phi;
      out[d_is_azimuth ? partner : d] = moved.theta;
    }
  }
  return out;
}

/// Vanilla trial move: every dimension takes a plain Gaussian step, no
/// wrapping or sphere transform — out-of-support trials are left for the
/// prior term of the acceptance ratio to kill.
inline std::vector<double> propose_vanilla(std::span<const double> current,
                                           std::span<const double> sigmas,
                                           std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> out(current.begin(), current.end());
  for (std::size_t d = 0; d < out.size(); ++d) out[d] = current[d] + sigmas[d] * gauss(rng);
  return out;
}

/// log of the constrained Metropolis acceptance probability:
/// -inf when the trial's likelihood does not exceed the threshold
/// (strictly), else min(log pi(theta_t) - log pi(theta_l), 0).
inline double constrained_accept_log_ratio(std::span<const double> theta_t,
                                           std::span<const double> theta_l,
                                           double loglike_t, double loglike_threshold,
                                           std::span<const PriorDim> prior) {
  if (!(loglike_t > loglike_threshold)) return neg_inf;
  const double lt = log_prior_density(prior, theta_t);
  if (lt == neg_inf) return neg_inf;
  const double ll = log_prior_density(prior, theta_l);
  return std::min(lt - ll, 0.0);
}

/// Eq.-16-style step-size adaptation, applied once per chain from that
/// chain's acceptance counts.
inline double adapted_sigma_scale(double scale, int n_accepted, int n_rejected) {
  if (n_accepted > n_rejected) return scale * std::exp(1.0 / n_accepted);
  if (n_rejected > 0) return scale * std::exp(-1.0 / n_rejected);
  return scale;
}

namespace detail {

/// Sum of log sin(zenith) over all sphere-zenith dimensions: the Jacobian
/// between the (phi, theta) chart density and the sphere's surface density.
inline double log_sphere_area_jacobian(std::span<const double> theta,
                                       const ParameterSpace& space) {
  double s = 0.0;
  for (std::size_t d = 0; d < space.size(); ++d)
    if (std::holds_alternative<SphereZenithDim>(space.dim(d))) {
      const double sv = std::sin(theta[d]);
      if (sv <= 0.0) return neg_inf;
      s += std::log(sv);
    }
  return s;
}

/// Acceptance log-ratio used by the geometric chain.  The sphere-pair move
/// is symmetric with respect to the sphere's surface measure (solid angle),
/// not the (phi, theta) chart, so for sphere pairs the prior ratio must be
/// evaluated as a surface density — divide the chart density by sin(theta).
/// For the canonical spherical prior (uniform azimuth x sinusoidal zenith)
/// the sphere term cancels exactly and only non-sphere dims contribute.
/// Circular and linear moves are chart-symmetric, so their densities enter
/// unchanged, as in constrained_accept_log_ratio.
inline double geometric_accept_log_ratio(std::span<const double> theta_t,
                                         std::span<const double> theta_l,
                                         double loglike_t, double loglike_threshold,
                                         std::span<const PriorDim> prior,
                                         const ParameterSpace& space) {
  if (!(loglike_t > loglike_threshold)) return neg_inf;
  const double lt = log_prior_density(prior, theta_t);
  if (lt == neg_inf) return neg_inf;
  const double jac_t = log_sphere_area_jacobian(theta_t, space);
  if (jac_t == neg_inf) return neg_inf;  // trial on a pole: chart degenerate
  const double ll = log_prior_density(prior, theta_l);
  const double jac_l = log_sphere_area_jacobian(theta_l, space);
  return std::min((lt - jac_t) - (ll - jac_l), 0.0);
}

}  // namespace detail

/// Evolve a likelihood-constrained Metropolis chain of exactly
/// n_t = nt_multiplier * N steps, starting from a uniformly random livepoint
/// whose loglike lies strictly above the threshold.  Rejected trials leave
/// the state in place; the last accepted state is returned.  A chain with
/// zero acceptances is restarted from a fresh random livepoint, up to 50
/// restarts, after which a SamplerStallError is thrown.  In vanilla mode
/// with adaptation on, the persistent step-size scale is updated once from
/// the returned chain's acceptance counts.
inline ChainOutcome evolve_chain(const LivePointSet& live, double threshold_loglike,
                                 const Model& model, const ProposalConfig& cfg,
                                 SamplerState& state, std::mt19937_64& rng) {
  cfg.check();
  live.check();
  const std::size_t n_dims = model.space.size();
  const int n_t = cfg.nt_multiplier * static_cast<int>(n_dims);

  bool any_eligible = false;
  for (double l : live.loglikes)
    if (l > threshold_loglike) {
      any_eligible = true;
      break;
    }
  if (!any_eligible) throw SamplerStallError(threshold_loglike, 0, n_t);

  std::vector<double> sigmas = trial_sigma_per_dim(live, model.space, cfg);
  if (cfg.mode == SamplerMode::vanilla)
    for (double& s : sigmas) s *= state.vanilla_sigma_scale;

  std::uniform_int_distribution<std::size_t> pick(0, live.n_l() - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const int max_restarts = 50;
  for (int restart = 0; restart <= max_restarts; ++restart) {
    std::size_t start = pick(rng);
    while (!(live.loglikes[start] > threshold_loglike)) start = pick(rng);

    std::vector<double> theta = live.points[start];
    double loglike = live.loglikes[start];
    int n_accepted = 0, n_rejected = 0;

    for (int step = 0; step < n_t; ++step) {
      const std::vector<double> trial =
          cfg.mode == SamplerMode::geometric
              ? propose(theta, sigmas, model.space, rng)
              : propose_vanilla(theta, sigmas, rng);
      double log_alpha = neg_inf;
      if (log_prior_density(model.prior, trial) > neg_inf) {
        const double trial_loglike = model.loglike(trial);
        if (std::isnan(trial_loglike) || trial_loglike == -neg_inf)
          throw NonFiniteLikelihoodError(trial, trial_loglike);
        log_alpha = cfg.mode == SamplerMode::geometric
                        ? detail::geometric_accept_log_ratio(
                              trial, theta, trial_loglike, threshold_loglike,
                              model.prior, model.space)
                        : constrained_accept_log_ratio(trial, theta, trial_loglike,
                                                       threshold_loglike, model.prior);
        if (log_alpha >= 0.0 || (log_alpha > neg_inf && std::log(unit(rng)) < log_alpha)) {
          theta = trial;
          loglike = trial_loglike;
          ++n_accepted;
          continue;
        }
      }
      ++n_rejected;
    }

    if (n_accepted >= 1) {
      if (cfg.mode == SamplerMode::vanilla && cfg.adapt_vanilla_sigma)
        state.vanilla_sigma_scale =
            adapted_sigma_scale(state.vanilla_sigma_scale, n_accepted, n_rejected);
      return {std::move(theta), loglike, n_accepted, n_rejected};
    }
  }
  throw SamplerStallError(threshold_loglike, max_restarts, n_t);
}

}  // namespace gns
