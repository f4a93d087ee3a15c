#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "gns/distributions.hpp"
#include "gns/errors.hpp"
#include "gns/livepoints.hpp"
#include "gns/logspace.hpp"
#include "gns/rng.hpp"
#include "gns/sampler.hpp"

namespace gns {

/// An evicted livepoint, archived with the iteration at which it died.
/// The deterministic volume estimate X_i = exp(-i/n_l) attaches the
/// quadrature slab X_{i-1} - X_i to iteration i.
struct DeadPoint {
  std::vector<double> theta;
  double loglike = 0.0;
  std::size_t iteration = 0;
  double log_weight = neg_inf;  // filled at finalization
};

struct LogNormalSummary {
  double logz_mean = 0.0;
  double logz_var = 0.0;
  bool var_clamped = false;
};

/// logz summary of a log-normally distributed Z from its first two raw
/// moments: logz_mean = 2 log m1 - (1/2) log m2, logz_var = log m2 - 2 log m1.
/// Numerical m2 < m1^2 clamps the variance at zero and flags it.
inline LogNormalSummary lognormal_report_log(double log_m1, double log_m2) {
  LogNormalSummary s;
  s.logz_var = log_m2 - 2.0 * log_m1;
  if (!(s.logz_var >= 0.0)) {
    s.logz_var = 0.0;
    s.var_clamped = true;
  }
  s.logz_mean = 2.0 * log_m1 - 0.5 * log_m2;
  return s;
}

inline LogNormalSummary lognormal_report(double m1, double m2) {
  if (!(m1 > 0.0)) throw std::domain_error("lognormal_report: requires m1 > 0");
  return lognormal_report_log(std::log(m1), std::log(m2));
}

/// Running first and second moments of the evidence under the shrinkage
/// model t_i ~ Beta(n_l, 1) i.i.d., X_i = t_i X_{i-1}.  Tracks E[Z], E[Z X],
/// E[Z^2], E[X], E[X^2] in log space; with a = E[t] = n/(n+1) and
/// b = E[t^2] = n/(n+2), one dead point of likelihood L updates
///   E[Z^2] += 2 L (1-a) E[Z X] + L^2 (1 - 2a + b) E[X^2]
///   E[Z X]  = a E[Z X] + L (a - b) E[X^2]
///   E[Z]   += L (1-a) E[X]
///   E[X]   *= a,   E[X^2] *= b
/// (second-moment lines use the pre-update E[Z X], E[X^2], E[X]); the final
/// livepoints contribute their mean likelihood against the leftover volume:
///   E[Z^2] += 2 Lbar E[Z X] + Lbar^2 E[X^2],  E[Z] += Lbar E[X].
class EvidenceAccumulator {
 public:
  explicit EvidenceAccumulator(std::size_t n_l) {
    if (n_l < 1) throw std::invalid_argument("EvidenceAccumulator: n_l >= 1");
    const double n = static_cast<double>(n_l);
    log_a_ = std::log(n) - std::log(n + 1.0);
    log_b_ = std::log(n) - std::log(n + 2.0);
    log_1ma_ = -std::log(n + 1.0);                                  // 1 - a
    log_amb_ = std::log(n) - std::log(n + 1.0) - std::log(n + 2.0); // a - b
    log_r2_ = std::log(2.0) - std::log(n + 1.0) - std::log(n + 2.0); // 1 - 2a + b
  }

  void add_dead(double loglike) {
    const double lL = loglike;
    const double new_m2 =
        logaddexp(log_m2_, logaddexp(std::log(2.0) + lL + log_1ma_ + log_zx_,
                                     2.0 * lL + log_r2_ + log_x2_));
    const double new_zx = logaddexp(log_a_ + log_zx_, lL + log_amb_ + log_x2_);
    log_m1_ = logaddexp(log_m1_, lL + log_1ma_ + log_x_);
    log_m2_ = new_m2;
    log_zx_ = new_zx;
    log_x_ += log_a_;
    log_x2_ += log_b_;
  }

  void add_final(double log_mean_live_like) {
    const double lL = log_mean_live_like;
    log_m2_ = logaddexp(log_m2_, logaddexp(std::log(2.0) + lL + log_zx_,
                                           2.0 * lL + log_x2_));
    log_m1_ = logaddexp(log_m1_, lL + log_x_);
  }

  double log_m1() const { return log_m1_; }
  double log_m2() const { return log_m2_; }
  LogNormalSummary report() const { return lognormal_report_log(log_m1_, log_m2_); }

 private:
  double log_m1_ = neg_inf, log_m2_ = neg_inf, log_zx_ = neg_inf;
  double log_x_ = 0.0, log_x2_ = 0.0;
  double log_a_, log_b_, log_1ma_, log_amb_, log_r2_;
};

/// n_l independent prior draws via the per-dimension inverse CDF.
inline LivePointSet init_livepoints(const Model& model, std::size_t n_l,
                                    std::mt19937_64& rng) {
  if (n_l < 2) throw std::invalid_argument("init_livepoints: n_l >= 2 required");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  LivePointSet live;
  live.points.reserve(n_l);
  live.loglikes.reserve(n_l);
  const std::size_t n_dims = model.space.size();
  if (model.prior.size() != n_dims)
    throw std::invalid_argument("init_livepoints: prior/space dimension mismatch");
  for (std::size_t i = 0; i < n_l; ++i) {
    std::vector<double> theta(n_dims);
    for (std::size_t d = 0; d < n_dims; ++d)
      theta[d] = prior_inverse_cdf(model.prior[d], unit(rng));
    const double ll = model.loglike(theta);
    if (!std::isfinite(ll)) throw NonFiniteLikelihoodError(theta, ll);
    live.points.push_back(std::move(theta));
    live.loglikes.push_back(ll);
  }
  return live;
}

struct RunDiagnostics {
  std::vector<double> acceptance_trace;  // per-iteration accepted fraction
  double mean_acceptance = 0.0;
  bool logz_var_clamped = false;
};

struct NSResult {
  double logz_mean = 0.0;
  double logz_err = 0.0;
  std::vector<DeadPoint> dead_points;
  std::vector<DeadPoint> final_livepoints;
  std::size_t n_iterations = 0;
  RunDiagnostics diagnostics;
};

/// Posterior weights P_i = L_i (X_{i-1} - X_i) / Z for the dead points
/// (deterministic X_i = exp(-i/n_l), n_l = final_live.size()), with the
/// final livepoints sharing the leftover X_{n_s} equally.  Ordered dead
/// first, then final.  With logz equal to the log of the same quadrature
/// sum the weights add up to one.
inline std::vector<double> posterior_weights(std::span<const DeadPoint> dead,
                                             std::span<const DeadPoint> final_live,
                                             double logz) {
  if (final_live.empty())
    throw std::invalid_argument("posterior_weights: empty final livepoint set");
  const double n = static_cast<double>(final_live.size());
  const double log_shrink = log1mexp(1.0 / n);  // log(1 - e^(-1/n))
  std::vector<double> w;
  w.reserve(dead.size() + final_live.size());
  for (const DeadPoint& dp : dead) {
    const double log_width =
        -(static_cast<double>(dp.iteration) - 1.0) / n + log_shrink;
    w.push_back(std::exp(dp.loglike + log_width - logz));
  }
  const double ns = dead.empty() ? 0.0 : static_cast<double>(dead.back().iteration);
  const double log_final_width = -ns / n - std::log(n);
  for (const DeadPoint& dp : final_live)
    w.push_back(std::exp(dp.loglike + log_final_width - logz));
  return w;
}

/// One nested-sampling run.  Per iteration: check the stopping rule, evict
/// the worst livepoint into the dead archive, book its evidence slab
/// (deterministic X_i = exp(-i/n_l) for the point estimate; Beta-shrinkage
/// moments for the error bar), and grow a constrained Metropolis chain for
/// the replacement.  Stops when the live set's possible remaining evidence
/// Z_f = mean(L_live) X_i satisfies Z_f/(Z_f + Z) < epsilon, or when the
/// live likelihoods have collapsed onto a plateau (max == min), which the
/// strict constraint could never leave.  The final livepoints then
/// contribute X_{n_s}/n_l each.
///
/// RNG streams are derived from the seed: stream 0 draws the initial
/// livepoints, stream i drives the chain of iteration i, so runs are
/// reproducible bit-for-bit for a fixed seed and build.
inline NSResult run(const Model& model, std::size_t n_l, const ProposalConfig& cfg,
                    double epsilon, std::uint64_t seed) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::invalid_argument("run: epsilon must lie in (0, 1)");
  cfg.check();

  std::mt19937_64 init_rng = make_rng_stream(seed, 0);
  LivePointSet live = init_livepoints(model, n_l, init_rng);
  SamplerState sampler_state;
  EvidenceAccumulator acc(n_l);

  const double n = static_cast<double>(n_l);
  const double log_eps = std::log(epsilon);
  const double log_shrink = log1mexp(1.0 / n);
  const std::size_t max_iterations = 200000 * n_l;

  NSResult result;
  double log_z = neg_inf;  // running point estimate of the evidence
  std::size_t iter = 0;

  while (true) {
    const auto worst_it = std::min_element(live.loglikes.begin(), live.loglikes.end());
    const std::size_t worst = static_cast<std::size_t>(worst_it - live.loglikes.begin());
    const double threshold = live.loglikes[worst];
    const double log_x = -static_cast<double>(iter) / n;

    // stopping checks: likelihood plateau, then the remaining-evidence ratio
    const double best = *std::max_element(live.loglikes.begin(), live.loglikes.end());
    if (!(best > threshold)) break;
    const double log_zf = logmeanexp(live.loglikes) + log_x;
    if (log_zf - logaddexp(log_zf, log_z) < log_eps) break;
    if (iter >= max_iterations)
      throw std::runtime_error("run: iteration cap exceeded; stopping rule never met");

    ++iter;
    const double log_width = log_x + log_shrink;  // log(X_{i-1} - X_i)
    log_z = logaddexp(log_z, threshold + log_width);
    acc.add_dead(threshold);
    result.dead_points.push_back(DeadPoint{live.points[worst], threshold, iter, neg_inf});

    std::mt19937_64 chain_rng = make_rng_stream(seed, iter);
    ChainOutcome outcome =
        evolve_chain(live, threshold, model, cfg, sampler_state, chain_rng);
    result.diagnostics.acceptance_trace.push_back(
        static_cast<double>(outcome.n_accepted) /
        static_cast<double>(outcome.n_accepted + outcome.n_rejected));
    live.points[worst] = std::move(outcome.new_point);
    live.loglikes[worst] = outcome.new_loglike;
  }

  // final livepoints: X_{n_s}/n_l each, sorted for deterministic output
  const double log_x_final = -static_cast<double>(iter) / n;
  std::vector<std::size_t> order(n_l);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return live.loglikes[a] < live.loglikes[b];
  });
  const double log_final_width = log_x_final - std::log(n);
  for (std::size_t idx : order) {
    log_z = logaddexp(log_z, live.loglikes[idx] + log_final_width);
    result.final_livepoints.push_back(
        DeadPoint{std::move(live.points[idx]), live.loglikes[idx], iter, neg_inf});
  }
  acc.add_final(logmeanexp(live.loglikes));

  const LogNormalSummary summary = acc.report();
  result.logz_mean = summary.logz_mean;
  result.logz_err = std::sqrt(summary.logz_var);
  result.n_iterations = iter;
  result.diagnostics.logz_var_clamped = summary.var_clamped;
  if (!result.diagnostics.acceptance_trace.empty())
    result.diagnostics.mean_acceptance =
        std::accumulate(result.diagnostics.acceptance_trace.begin(),
                        result.diagnostics.acceptance_trace.end(), 0.0) /
        static_cast<double>(result.diagnostics.acceptance_trace.size());

  const std::vector<double> weights =
      posterior_weights(result.dead_points, result.final_livepoints, log_z);
  for (std::size_t i = 0; i < result.dead_points.size(); ++i)
    result.dead_points[i].log_weight = std::log(weights[i]);
  for (std::size_t i = 0; i < result.final_livepoints.size(); ++i)
    result.final_livepoints[i].log_weight =
        std::log(weights[result.dead_points.size() + i]);
  return result;
}

}  // namespace gns
