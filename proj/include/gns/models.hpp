#pragma once

#include <charconv>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gns/distributions.hpp"

namespace gns {

/// Human-readable "name  latex-label" pairs for a model's parameters,
/// in parameter order.
inline std::vector<std::pair<std::string, std::string>> param_name_labels(
    const Model& model);

namespace detail {

inline std::optional<std::size_t> parse_count(std::string_view s) {
  std::size_t value = 0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || s.empty()) return std::nullopt;
  return value;
}

inline Model make_circle() {
  Model m;
  m.name = "circle";
  m.space = ParameterSpace({CircularDim{0.0, two_pi}});
  m.prior = {UniformPrior{0.0, two_pi}};
  m.log_likelihood = [](std::span<const double> t) {
    return log_von_mises(t[0], VonMisesParams{0.0, 0.25});
  };
  return m;
}

inline Model make_torus(std::size_t n) {
  Model m;
  m.name = "torus" + std::to_string(n);
  std::vector<DimensionKind> dims;
  for (std::size_t i = 0; i < n; ++i) {
    dims.push_back(CircularDim{0.0, two_pi});
    m.prior.push_back(UniformPrior{0.0, two_pi});
  }
  m.space = ParameterSpace(std::move(dims));
  m.log_likelihood =
      [params = std::vector<VonMisesParams>(n, VonMisesParams{0.0, 0.25})](
          std::span<const double> t) { return log_torus(t, params); };
  return m;
}

inline Model make_spheres(std::size_t n_spheres) {
  Model m;
  m.name = "sphere" + std::to_string(n_spheres);
  std::vector<DimensionKind> dims;
  for (std::size_t k = 0; k < n_spheres; ++k) {
    dims.push_back(SphereAzimuthDim{2 * k + 1});
    dims.push_back(SphereZenithDim{2 * k});
    m.prior.push_back(UniformPrior{0.0, two_pi});
    m.prior.push_back(SinusoidalPrior{0.0, pi});
  }
  m.space = ParameterSpace(std::move(dims));
  m.log_likelihood = [n_spheres, comps = flower_components()](std::span<const double> t) {
    double s = 0.0;
    for (std::size_t k = 0; k < n_spheres; ++k)
      s += log_flower(t[2 * k], t[2 * k + 1], comps);
    return s;
  };
  return m;
}

}  // namespace detail

/// Registry lookup: "circle" | "torus<n>" (n >= 2) | "sphere<m>" (m >= 1,
/// 2m dims), each with its canonical parameters.
inline std::optional<Model> make_model(std::string_view key) {
  if (key == "circle") return detail::make_circle();
  if (key.starts_with("torus")) {
    const auto n = detail::parse_count(key.substr(5));
    if (n && *n >= 2) return detail::make_torus(*n);
    return std::nullopt;
  }
  if (key.starts_with("sphere")) {
    const auto n = detail::parse_count(key.substr(6));
    if (n && *n >= 1) return detail::make_spheres(*n);
    return std::nullopt;
  }
  return std::nullopt;
}

inline constexpr const char* model_registry_hint =
    "known models: circle, torus<n> (n >= 2), sphere<m> (m >= 1)";

inline std::vector<std::pair<std::string, std::string>> param_name_labels(
    const Model& model) {
  std::vector<std::pair<std::string, std::string>> names;
  std::size_t n_circ = 0, n_sph = 0;
  const std::size_t n_dims = model.space.size();
  for (std::size_t d = 0; d < n_dims; ++d) {
    const DimensionKind& kind = model.space.dim(d);
    if (std::holds_alternative<SphereAzimuthDim>(kind)) {
      ++n_sph;
      names.emplace_back("phi" + std::to_string(n_sph),
                         "\\phi_{" + std::to_string(n_sph) + "}");
    } else if (std::holds_alternative<SphereZenithDim>(kind)) {
      names.emplace_back("theta" + std::to_string(n_sph),
                         "\\theta_{" + std::to_string(n_sph) + "}");
    } else if (n_dims == 1) {
      names.emplace_back("phi", "\\phi");
    } else {
      ++n_circ;
      names.emplace_back("theta" + std::to_string(n_circ),
                         "\\theta_{" + std::to_string(n_circ) + "}");
    }
  }
  return names;
}

}  // namespace gns
