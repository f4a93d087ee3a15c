#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "gns/distributions.hpp"
#include "gns/logspace.hpp"

namespace gns {

/// Independent evidence oracle: log of the midpoint-rule quadrature of
/// L(theta) pi(theta) over the prior support, one resolution per dimension.
/// Deliberately refuses more than 3 dimensions — the cost grows as the
/// product of resolutions and the oracle exists to check low-dimensional
/// factors, not to replace the sampler.
inline double grid_log_evidence(const Model& model,
                                std::span<const std::size_t> resolution) {
  const std::size_t n_dims = model.space.size();
  if (n_dims > 3)
    throw std::invalid_argument("grid_log_evidence: refuses dimension > 3");
  if (resolution.size() != n_dims)
    throw std::invalid_argument("grid_log_evidence: resolution/dimension mismatch");
  if (model.prior.size() != n_dims)
    throw std::invalid_argument("grid_log_evidence: prior/space dimension mismatch");
  for (std::size_t r : resolution)
    if (r == 0) throw std::invalid_argument("grid_log_evidence: zero resolution");

  double log_cell = 0.0;
  std::vector<double> lo(n_dims), step(n_dims);
  for (std::size_t d = 0; d < n_dims; ++d) {
    const Bounds b = prior_bounds(model.prior[d]);
    lo[d] = b.lo;
    step[d] = (b.hi - b.lo) / static_cast<double>(resolution[d]);
    log_cell += std::log(step[d]);
  }

  std::vector<std::size_t> idx(n_dims, 0);
  std::vector<double> theta(n_dims);
  double sum = neg_inf;
  while (true) {
    for (std::size_t d = 0; d < n_dims; ++d)
      theta[d] = lo[d] + (static_cast<double>(idx[d]) + 0.5) * step[d];
    const double lp = log_prior_density(model.prior, theta);
    if (lp > neg_inf) sum = logaddexp(sum, model.loglike(theta) + lp);
    std::size_t d = 0;
    for (; d < n_dims; ++d) {
      if (++idx[d] < resolution[d]) break;
      idx[d] = 0;
    }
    if (d == n_dims) break;
  }
  return sum + log_cell;
}

inline double grid_log_evidence(const Model& model, std::size_t resolution) {
  const std::vector<std::size_t> res(model.space.size(), resolution);
  return grid_log_evidence(model, res);
}

}  // namespace gns
