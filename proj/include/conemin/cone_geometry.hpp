#ifndef CONEMIN_CONE_GEOMETRY_HPP
#define CONEMIN_CONE_GEOMETRY_HPP

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace conemin {

/// The metric cone C(S^n(lambda)) = ([0, inf) x S^n, dt^2 + t^2 lambda^2 g_{S^n}).
///
/// lambda = 1 is flat R^{n+1}; lambda < 1 has a conical singularity at the
/// vertex and positive curvature on the tangential planes.
class ConeSpace {
public:
  ConeSpace(int n, double lambda) : n_(n), lambda_(lambda) {
    if (n < 2) {
      throw std::invalid_argument("ConeSpace: n must be >= 2, got " + std::to_string(n));
    }
    if (!(lambda > 0.0 && lambda <= 1.0)) {
      throw std::invalid_argument("ConeSpace: lambda must lie in (0, 1], got " +
                                  std::to_string(lambda));
    }
  }

  int n() const noexcept { return n_; }
  double lambda() const noexcept { return lambda_; }
  bool euclidean() const noexcept { return lambda_ == 1.0; }

  friend bool operator==(const ConeSpace&, const ConeSpace&) = default;

private:
  int n_;
  double lambda_;
};

/// Curvature of the round cross-section S^n(lambda).
struct CrossSectionCurvature {
  double sectional;
  double ricci_diag;
  int dim;
};

inline CrossSectionCurvature cross_section_curvature(const ConeSpace& space) {
  const double k = 1.0 / (space.lambda() * space.lambda());
  return {k, (space.n() - 1) * k, space.n()};
}

enum class PlaneKind { tangential, radial };

namespace detail {

inline void require_off_vertex(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw std::domain_error("cone curvature: t must be finite and > 0 (the vertex is singular)");
  }
}

} // namespace detail

/// Sectional curvature of the cone metric at distance t from the vertex.
/// Planes spanned by two tangential directions carry (K_M - 1)/t^2; any
/// plane containing the radial direction is flat.
inline double cone_sectional(const ConeSpace& space, double t, PlaneKind plane) {
  detail::require_off_vertex(t);
  if (plane == PlaneKind::radial) {
    return 0.0;
  }
  const double k = cross_section_curvature(space).sectional;
  return (k - 1.0) / (t * t);
}

/// Ricci curvature of the cone metric in a tangential or the radial direction.
inline double cone_ricci(const ConeSpace& space, double t, PlaneKind direction) {
  detail::require_off_vertex(t);
  if (direction == PlaneKind::radial) {
    return 0.0;
  }
  const auto cs = cross_section_curvature(space);
  return (cs.ricci_diag - (cs.dim - 1)) / (t * t);
}

/// Volume of the unit ball in R^k.
inline double unit_ball_volume(int k) {
  if (k < 0) {
    throw std::invalid_argument("unit_ball_volume: k must be >= 0");
  }
  return std::pow(std::numbers::pi, 0.5 * k) / std::tgamma(0.5 * k + 1.0);
}

} // namespace conemin

#endif // CONEMIN_CONE_GEOMETRY_HPP
