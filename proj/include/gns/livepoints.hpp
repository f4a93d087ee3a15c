#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace gns {

/// The active sample set of a nested-sampling run.
struct LivePointSet {
  std::vector<std::vector<double>> points;
  std::vector<double> loglikes;

  std::size_t n_l() const { return points.size(); }

  void check() const {
    if (points.size() != loglikes.size())
      throw std::invalid_argument("LivePointSet: points/loglikes length mismatch");
    if (points.size() < 2) throw std::invalid_argument("LivePointSet: n_l >= 2 required");
  }
};

}  // namespace gns
