#pragma once

#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace gns {

/// The constrained Metropolis chain accepted nothing across its restart
/// budget: every trial fell below the likelihood threshold (or out of the
/// prior support).
class SamplerStallError : public std::runtime_error {
 public:
  SamplerStallError(double threshold, int restarts, int n_t)
      : std::runtime_error(format(threshold, restarts, n_t)),
        threshold_(threshold),
        restarts_(restarts),
        n_t_(n_t) {}

  double threshold() const { return threshold_; }
  int restarts() const { return restarts_; }
  int chain_length() const { return n_t_; }

 private:
  static std::string format(double threshold, int restarts, int n_t) {
    std::ostringstream os;
    os << "sampler stalled: 0 acceptances in " << restarts
       << " restarts of chains of length " << n_t << " at log-likelihood threshold "
       << threshold;
    return os.str();
  }
  double threshold_;
  int restarts_;
  int n_t_;
};

/// A likelihood evaluation returned NaN or +inf; carries the offending point.
class NonFiniteLikelihoodError : public std::runtime_error {
 public:
  NonFiniteLikelihoodError(std::vector<double> theta, double loglike)
      : std::runtime_error(format(theta, loglike)), theta_(std::move(theta)) {}

  const std::vector<double>& theta() const { return theta_; }

 private:
  static std::string format(const std::vector<double>& theta, double loglike) {
    std::ostringstream os;
    os << "non-finite log-likelihood " << loglike << " at theta = (";
    for (std::size_t i = 0; i < theta.size(); ++i) os << (i ? ", " : "") << theta[i];
    os << ")";
    return os.str();
  }
  std::vector<double> theta_;
};

}  // namespace gns
