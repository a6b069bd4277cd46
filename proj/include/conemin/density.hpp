#ifndef CONEMIN_DENSITY_HPP
#define CONEMIN_DENSITY_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "conemin/cone_geometry.hpp"
#include "conemin/quadrature.hpp"
#include "conemin/radial_profile.hpp"

namespace conemin {

/// The totally geodesic hypercone C(S^{n-1}(lambda)) inside C(S^n(lambda)).
struct GeodesicHypercone {
  ConeSpace space;
};

/// A k-dimensional rotationally symmetric surface given by a one-parameter
/// family of (k-1)-spheres: parameter s in [lo, hi], distance(s) from the
/// vertex, and area density dA/ds.
struct RotationalSurface {
  int dim = 2;
  double lo = 0.0;
  double hi = 0.0;
  std::function<double(double)> distance;
  std::function<double(double)> area_density;
  std::vector<double> breakpoints;
  // Largest ball radius whose intersection stays inside the patch.
  double radius_bound = std::numeric_limits<double>::infinity();
};

struct DensityConfig {
  double tol = 1e-8;
  int bins = 512;
};

/// Catenoid x^2 + y^2 = a^2 cosh^2(z/a) in R^3, |z| <= z_max, centred at the
/// origin.
inline RotationalSurface euclidean_catenoid(double a, double z_max) {
  if (!(a > 0.0) || !(z_max > 0.0)) {
    throw std::invalid_argument("euclidean_catenoid: a and z_max must be positive");
  }
  RotationalSurface s;
  s.dim = 2;
  s.lo = -z_max;
  s.hi = z_max;
  s.distance = [a](double z) { return std::hypot(a * std::cosh(z / a), z); };
  s.area_density = [a](double z) {
    const double c = std::cosh(z / a);
    return 2.0 * std::numbers::pi * a * c * c;
  };
  s.breakpoints = {0.0};
  s.radius_bound = s.distance(z_max);
  return s;
}

/// The cone C(S^{n-1}(lambda)) parametrized by distance, up to r_max.
inline RotationalSurface hypercone_surface(const ConeSpace& space, double r_max) {
  if (!(r_max > 0.0)) {
    throw std::invalid_argument("hypercone_surface: r_max must be positive");
  }
  const int n = space.n();
  const double area_coeff = n * unit_ball_volume(n) * std::pow(space.lambda(), n - 1);
  RotationalSurface s;
  s.dim = n;
  s.lo = 0.0;
  s.hi = r_max;
  s.distance = [](double r) { return r; };
  s.area_density = [area_coeff, n](double r) { return area_coeff * std::pow(r, n - 1); };
  s.radius_bound = r_max;
  return s;
}

/// Radial graph r = f(theta) in C(S^n(lambda)); its theta-slice is a round
/// (n-1)-sphere of radius lambda f cos(theta).
inline RotationalSurface profile_surface(const RadialProfile& f, const ConeSpace& space) {
  const int n = space.n();
  const double lambda = space.lambda();
  const double sphere_coeff = n * unit_ball_volume(n);
  RotationalSurface s;
  s.dim = n;
  s.lo = f.lower();
  s.hi = f.upper();
  s.distance = [f](double theta) { return f.value(theta); };
  s.area_density = [f, n, lambda, sphere_coeff](double theta) {
    const double v = f.value(theta);
    return sphere_coeff * std::pow(lambda * v * std::cos(theta), n - 1) *
           std::hypot(f.slope(theta), lambda * v);
  };
  const auto bp = f.breakpoints();
  s.breakpoints.assign(bp.begin(), bp.end());
  s.radius_bound = f.value(f.lower());
  if (f.upper() < 0.5 * std::numbers::pi) {
    s.radius_bound = std::min(s.radius_bound, f.value(f.upper()));
  }
  return s;
}

/// Vol(B_r cap Sigma) / r^k, exact for the hypercone: omega_n lambda^{n-1}.
inline double density_ratio(const GeodesicHypercone& cone, double r) {
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw std::domain_error("density_ratio: r must be finite and > 0");
  }
  const int n = cone.space.n();
  return unit_ball_volume(n) * std::pow(cone.space.lambda(), n - 1);
}

/// Vol(B_r cap Sigma) by quadrature over the parameter set {distance <= r}.
/// The parameter range is cut into bins; sign changes of distance - r inside
/// a bin are located by bracketing root finding.
inline double enclosed_area(const RotationalSurface& surface, double r,
                            const DensityConfig& cfg = {}) {
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw std::domain_error("density_ratio: r must be finite and > 0");
  }
  if (r > surface.radius_bound * (1.0 + 1e-14)) {
    throw std::domain_error("density_ratio: ball of radius " + std::to_string(r) +
                            " leaves the surface patch");
  }
  if (cfg.bins < 1 || !(cfg.tol > 0.0)) {
    throw std::invalid_argument("DensityConfig: need bins >= 1 and tol > 0");
  }

  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(cfg.bins) + surface.breakpoints.size() + 1);
  for (int i = 0; i <= cfg.bins; ++i) {
    grid.push_back(i == cfg.bins ? surface.hi
                                 : surface.lo + (surface.hi - surface.lo) * i / cfg.bins);
  }
  for (double b : surface.breakpoints) {
    if (b > surface.lo && b < surface.hi) {
      grid.push_back(b);
    }
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  auto excess = [&](double s) { return surface.distance(s) - r; };
  std::vector<double> cuts{grid.front()};
  double prev = excess(grid.front());
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double cur = excess(grid[i]);
    if ((prev < 0.0) != (cur < 0.0) && prev != 0.0 && cur != 0.0) {
      std::uintmax_t iters = 200;
      auto tol = boost::math::tools::eps_tolerance<double>(52);
      const auto root = boost::math::tools::toms748_solve(excess, grid[i - 1], grid[i], prev, cur,
                                                          tol, iters);
      cuts.push_back(0.5 * (root.first + root.second));
    }
    cuts.push_back(grid[i]);
    prev = cur;
  }

  // Merge consecutive inside pieces into runs and integrate each run once.
  std::vector<std::pair<double, double>> runs;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i];
    const double b = cuts[i + 1];
    if (!(b > a) || excess(0.5 * (a + b)) > 0.0) {
      continue;
    }
    if (!runs.empty() && runs.back().second == a) {
      runs.back().second = b;
    } else {
      runs.emplace_back(a, b);
    }
  }

  QuadratureConfig qcfg;
  qcfg.abs_tol = cfg.tol * 1e-2 / static_cast<double>(std::max<std::size_t>(1, runs.size()));
  qcfg.rel_tol = cfg.tol * 1e-2;
  double total = 0.0;
  for (const auto& [a, b] : runs) {
    total += integrate(surface.area_density, a, b, qcfg, surface.breakpoints).value;
  }
  return total;
}

inline double density_ratio(const RotationalSurface& surface, double r,
                            const DensityConfig& cfg = {}) {
  return enclosed_area(surface, r, cfg) / std::pow(r, surface.dim);
}

} // namespace conemin

#endif // CONEMIN_DENSITY_HPP
