#ifndef CONEMIN_AREA_FUNCTIONALS_HPP
#define CONEMIN_AREA_FUNCTIONALS_HPP

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "conemin/cone_geometry.hpp"
#include "conemin/quadrature.hpp"
#include "conemin/radial_profile.hpp"

namespace conemin {

/// Area of the radial graph r = f(t) over a 2-dimensional cross-section whose
/// distance-t level sets have length L(t):
///   \int f(t) L(t) sqrt(f'(t)^2 + f(t)^2) dt
/// over the part of the profile domain where L is supported.
inline double graph_area(const RadialProfile& f, const LengthProfile& L,
                         const QuadratureConfig& cfg = {}) {
  const double lo = std::max(0.0, f.lower());
  const double hi = std::min(f.upper(), L.support_end());
  if (!(hi > lo)) {
    return 0.0;
  }
  auto integrand = [&](double t) {
    const double v = f.value(t);
    return v * L(t) * std::hypot(f.slope(t), v);
  };
  return integrate(integrand, lo, hi, cfg, f.breakpoints()).value;
}

/// Normalized area of the rotational graph r = f(theta) in C(S^n(lambda)):
///   S(f) = \int_0^{pi/2} sqrt(f'^2 + lambda^2 f^2) f^{n-1} cos^{n-1}(theta) dtheta.
/// The full area is n * omega_n * lambda^{n-1} * S(f); the totally geodesic
/// hypercone has S = 1/n.
inline double s_functional(const RadialProfile& f, const ConeSpace& space,
                           const QuadratureConfig& cfg = {}) {
  constexpr double half_pi = 0.5 * std::numbers::pi;
  if (!f.covers(0.0, half_pi)) {
    throw std::domain_error("s_functional: profile must be defined on [0, pi/2]");
  }
  const int m = space.n() - 1;
  const double lambda = space.lambda();
  auto integrand = [&](double theta) {
    const double v = f.value(theta);
    return std::hypot(f.slope(theta), lambda * v) * std::pow(v * std::cos(theta), m);
  };
  return integrate(integrand, 0.0, half_pi, cfg, f.breakpoints()).value;
}

} // namespace conemin

#endif // CONEMIN_AREA_FUNCTIONALS_HPP
