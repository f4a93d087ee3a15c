#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <variant>
#include <vector>

namespace gns {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Wrap a value into the half-open interval [lo, hi) by translation
/// (modular arithmetic), so circular distances are preserved: an overshoot
/// past hi re-enters at lo.  A reflection variant (bouncing the overshoot
/// back off the boundary) is sometimes written down instead, but it does
/// not preserve the circular metric, so it is deliberately not offered.
inline double wrap(double value, double lo, double hi) {
  if (!std::isfinite(value) || !std::isfinite(lo) || !std::isfinite(hi))
    throw std::domain_error("wrap: non-finite argument");
  if (!(lo < hi)) throw std::domain_error("wrap: requires lo < hi");
  const double range = hi - lo;
  double r = value - range * std::floor((value - lo) / range);
  if (r >= hi) r = lo;  // guard the rounding edge
  if (r < lo) r = lo;
  return r;
}

struct UnitVector3 {
  double x = 0.0, y = 0.0, z = 1.0;
  double norm() const { return std::sqrt(x * x + y * y + z * z); }
  double dot(const UnitVector3& o) const { return x * o.x + y * o.y + z * o.z; }
};

struct SpherePoint {
  double phi = 0.0;    // azimuth in [0, 2*pi)
  double theta = 0.0;  // zenith in [0, pi]
};

/// Embed (phi, theta) on the unit sphere:
///   (cos(phi) sin(theta), sin(phi) sin(theta), cos(theta)).
inline UnitVector3 sph_to_cart(double phi, double theta) {
  if (!std::isfinite(phi) || !std::isfinite(theta))
    throw std::domain_error("sph_to_cart: non-finite angle");
  const double st = std::sin(theta);
  return {std::cos(phi) * st, std::sin(phi) * st, std::cos(theta)};
}

/// Inverse of sph_to_cart for any nonzero vector (the direction is used;
/// the radius is divided out).  theta = arccos(z/|v|) in [0, pi]; phi is the
/// planar azimuth folded into [0, 2*pi).  On the polar axis (x = y = 0) the
/// azimuth is degenerate and fixed to 0.  The zero vector has no direction
/// and is rejected.
inline SpherePoint cart_to_sph(double x, double y, double z) {
  const double r = std::sqrt(x * x + y * y + z * z);
  if (r == 0.0) throw std::domain_error("cart_to_sph: zero vector");
  if (!std::isfinite(r)) throw std::domain_error("cart_to_sph: non-finite vector");
  double c = z / r;
  c = std::max(-1.0, std::min(1.0, c));
  const double theta = std::acos(c);
  double phi = 0.0;
  if (x != 0.0 || y != 0.0) {
    phi = std::atan2(y, x);
    if (phi < 0.0) phi += two_pi;
    if (phi >= two_pi) phi = 0.0;
  }
  return {phi, theta};
}

inline SpherePoint cart_to_sph(const UnitVector3& v) { return cart_to_sph(v.x, v.y, v.z); }

// --- parameter spaces ------------------------------------------------------

struct LinearDim {
  double lo, hi;
};
struct CircularDim {
  double lo, hi;
};
/// One half of a sphere pair; `partner` is the index of the matching zenith
/// (resp. azimuth) dimension. Azimuth lives on [0, 2*pi), zenith on [0, pi].
struct SphereAzimuthDim {
  std::size_t partner;
};
struct SphereZenithDim {
  std::size_t partner;
};

using DimensionKind =
    std::variant<LinearDim, CircularDim, SphereAzimuthDim, SphereZenithDim>;

struct Bounds {
  double lo, hi;
};

class ParameterSpace {
 public:
  ParameterSpace() = default;
  explicit ParameterSpace(std::vector<DimensionKind> dims) : dims_(std::move(dims)) {
    validate();
  }

  std::size_t size() const { return dims_.size(); }
  const DimensionKind& dim(std::size_t i) const { return dims_.at(i); }
  const std::vector<DimensionKind>& dims() const { return dims_; }

  bool is_sphere_dim(std::size_t i) const {
    return std::holds_alternative<SphereAzimuthDim>(dims_.at(i)) ||
           std::holds_alternative<SphereZenithDim>(dims_.at(i));
  }

  Bounds bounds(std::size_t i) const {
    const DimensionKind& d = dims_.at(i);
    if (const auto* l = std::get_if<LinearDim>(&d)) return {l->lo, l->hi};
    if (const auto* c = std::get_if<CircularDim>(&d)) return {c->lo, c->hi};
    if (std::holds_alternative<SphereAzimuthDim>(d)) return {0.0, two_pi};
    return {0.0, pi};
  }

 private:
  void validate() const {
    if (dims_.empty()) throw std::invalid_argument("ParameterSpace: empty");
    for (std::size_t i = 0; i < dims_.size(); ++i) {
      const DimensionKind& d = dims_[i];
      if (const auto* l = std::get_if<LinearDim>(&d)) {
        if (!(l->lo < l->hi)) throw std::invalid_argument("ParameterSpace: lo >= hi");
      } else if (const auto* c = std::get_if<CircularDim>(&d)) {
        if (!(c->lo < c->hi)) throw std::invalid_argument("ParameterSpace: lo >= hi");
      } else if (const auto* a = std::get_if<SphereAzimuthDim>(&d)) {
        if (a->partner >= dims_.size() || a->partner == i ||
            !std::holds_alternative<SphereZenithDim>(dims_[a->partner]) ||
            std::get<SphereZenithDim>(dims_[a->partner]).partner != i)
          throw std::invalid_argument("ParameterSpace: dangling sphere pair");
      } else if (const auto* zn = std::get_if<SphereZenithDim>(&d)) {
        if (zn->partner >= dims_.size() || zn->partner == i ||
            !std::holds_alternative<SphereAzimuthDim>(dims_[zn->partner]) ||
            std::get<SphereAzimuthDim>(dims_[zn->partner]).partner != i)
          throw std::invalid_argument("ParameterSpace: dangling sphere pair");
      }
    }
  }

  std::vector<DimensionKind> dims_;
};

}  // namespace gns
