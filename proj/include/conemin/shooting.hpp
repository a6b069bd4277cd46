#ifndef CONEMIN_SHOOTING_HPP
#define CONEMIN_SHOOTING_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/interpolators/cubic_hermite.hpp>
#include <boost/numeric/odeint.hpp>

#include "conemin/cone_geometry.hpp"
#include "conemin/errors.hpp"
#include "conemin/quadrature.hpp"
#include "conemin/radial_profile.hpp"

namespace conemin {

namespace detail {
inline constexpr double half_pi = 0.5 * std::numbers::pi;
} // namespace detail

/// H' = n lambda - (n-1) tan(theta) cot(H).
inline double h_rhs(double theta, double H, const ConeSpace& space) {
  if (!(theta >= 0.0 && theta < detail::half_pi)) {
    throw std::domain_error("h_rhs: theta must lie in [0, pi/2)");
  }
  if (!(H > 0.0 && H < std::numbers::pi)) {
    throw std::domain_error("h_rhs: H must lie in (0, pi)");
  }
  const int n = space.n();
  return n * space.lambda() - (n - 1) * std::tan(theta) / std::tan(H);
}

/// f'(0) for a start at angle H0 with f(0) = 1.
inline double initial_slope(double H0, const ConeSpace& space) {
  return -space.lambda() / std::tan(H0);
}

/// H(0) = arccos(-A / sqrt(A^2 + lambda^2)), evaluated as atan2 so small
/// angles keep their relative accuracy.
inline double initial_angle(double A, const ConeSpace& space) {
  if (std::isinf(A)) {
    return A < 0.0 ? 0.0 : std::numbers::pi;
  }
  return std::atan2(space.lambda(), -A);
}

/// Normalized area -A / (n sqrt(A^2 + lambda^2)) of a solution that extends
/// to pi/2 with initial slope A.
inline double boundary_flux(double A, const ConeSpace& space) {
  if (A > 0.0) {
    throw std::invalid_argument("boundary_flux: initial slope must be <= 0");
  }
  if (std::isinf(A)) {
    return 1.0 / space.n();
  }
  return -A / (space.n() * std::hypot(A, space.lambda()));
}

// ---------------------------------------------------------------------------
// Barrier line H = c theta.

struct BarrierRoots {
  double smaller;
  double larger;
};

/// Both roots of c = n lambda - (n-1)/c, when real.
inline std::optional<BarrierRoots> barrier_roots(const ConeSpace& space) {
  const int n = space.n();
  const double nl = n * space.lambda();
  const double disc = nl * nl - 4.0 * (n - 1);
  if (disc < 0.0) {
    return std::nullopt;
  }
  const double larger = 0.5 * (nl + std::sqrt(disc));
  return BarrierRoots{(n - 1) / larger, larger};
}

inline std::optional<double> barrier_slope(const ConeSpace& space) {
  if (auto roots = barrier_roots(space)) {
    return roots->larger;
  }
  return std::nullopt;
}

struct BarrierPoint {
  double theta;
  double H;
  double rhs;
};

struct BarrierCertificate {
  double c = 0.0;
  std::vector<BarrierPoint> verified_points;
  double margin = 0.0;
  bool double_root = false;

  /// A double root makes the line itself a solution; zero margin still
  /// blocks crossing then.
  bool valid() const { return margin > 0.0 || (double_root && margin >= 0.0); }
};

/// Checks h_rhs(theta, c theta) >= c along the line at `samples` interior
/// points of (0, pi/2 min(1, 1/c)). The margin at each point is evaluated as
/// (n-1)(tan(c theta) - c tan(theta)) / (c tan(c theta)), which equals
/// h_rhs - c but does not cancel for small theta.
inline BarrierCertificate barrier_certificate(const ConeSpace& space, int samples) {
  if (samples < 1) {
    throw std::invalid_argument("barrier_certificate: samples must be >= 1");
  }
  const auto c_opt = barrier_slope(space);
  if (!c_opt) {
    throw std::invalid_argument("barrier_certificate: n lambda < 2 sqrt(n-1), no barrier slope");
  }
  const int n = space.n();
  const double nl = n * space.lambda();
  BarrierCertificate cert;
  cert.c = *c_opt;
  cert.double_root = nl * nl - 4.0 * (n - 1) == 0.0;
  const double c = cert.c;
  const double theta_max = detail::half_pi * std::min(1.0, 1.0 / c);
  cert.margin = std::numeric_limits<double>::infinity();
  cert.verified_points.reserve(static_cast<std::size_t>(samples));
  for (int i = 1; i <= samples; ++i) {
    const double theta = theta_max * i / (samples + 1);
    const double H = c * theta;
    const double tc = std::tan(H);
    const double m = (n - 1) * (tc - c * std::tan(theta)) / (c * tc);
    cert.verified_points.push_back({theta, H, h_rhs(theta, H, space)});
    cert.margin = std::min(cert.margin, m);
  }
  return cert;
}

// ---------------------------------------------------------------------------
// Shooting.

enum class ExitKind { extends_to_half_pi, exits_at_floor, exits_at_ceiling, stalled_numeric };

inline const char* to_string(ExitKind k) {
  switch (k) {
  case ExitKind::extends_to_half_pi:
    return "ExtendsToHalfPi";
  case ExitKind::exits_at_floor:
    return "ExitsAtFloor";
  case ExitKind::exits_at_ceiling:
    return "ExitsAtCeiling";
  case ExitKind::stalled_numeric:
    return "StalledNumeric";
  }
  return "?";
}

struct ShootingConfig {
  double rel_tol = 1e-11;
  double abs_tol = 1e-12;
  double h_floor = 1e-9;
  // Integration stops at pi/2 - end_margin, where tan(theta) is still finite.
  double end_margin = 1e-3;
  double initial_step = 1e-6;
  double min_step = 1e-15;
  std::size_t max_steps = 2000000;
  // Independent-variable switch: to H when H' drops below the first value,
  // back to theta when it rises above the second.
  double switch_to_h = -64.0;
  double switch_to_theta = -16.0;
  bool record = true;

  void validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0) || !(h_floor > 0.0) || !(initial_step > 0.0) ||
        !(min_step > 0.0)) {
      throw std::invalid_argument("ShootingConfig: tolerances, floor and steps must be positive");
    }
    if (!(end_margin > 0.0 && end_margin < 0.5)) {
      throw std::invalid_argument("ShootingConfig: end_margin must lie in (0, 0.5)");
    }
    if (!(switch_to_h < switch_to_theta && switch_to_theta < 0.0)) {
      throw std::invalid_argument("ShootingConfig: need switch_to_h < switch_to_theta < 0");
    }
  }
};

struct TrajectoryPoint {
  double theta;
  double H;
  double log_f;
};

struct ShootingOutcome {
  ExitKind kind = ExitKind::stalled_numeric;
  double H0 = 0.0;
  double theta_end = 0.0;
  // theta* for exits, theta_end when extending, last reached theta when stalled.
  double theta_exit = 0.0;
  double H_exit = 0.0;
  double f_end = 0.0;
  // For extending shots: (pi/2 - H) - lambda (pi/2 - theta) at theta_end.
  // Positive leans toward the floor, negative toward the ceiling.
  double end_deviation = std::numeric_limits<double>::quiet_NaN();
  double error_bound = 0.0;
  std::size_t steps = 0;
  std::size_t rejected = 0;
  std::string diagnostics;
  std::vector<TrajectoryPoint> trajectory;
};

namespace detail {

using state2 = std::array<double, 2>;

inline bool finite2(const state2& x) { return std::isfinite(x[0]) && std::isfinite(x[1]); }

} // namespace detail

/// Integrates H' = h_rhs(theta, H) from H(0) = H0 together with
/// (ln f)' = -lambda cot H, until the trajectory leaves
/// D = {0 < theta < pi/2, 0 < H < pi/2} or reaches pi/2 - end_margin.
inline ShootingOutcome shoot(const ConeSpace& space, double H0, const ShootingConfig& cfg = {}) {
  using namespace boost::numeric::odeint;
  using detail::half_pi;
  using detail::state2;
  cfg.validate();
  if (!(H0 > 0.0 && H0 <= half_pi)) {
    throw std::invalid_argument("shoot: H0 must lie in (0, pi/2]");
  }

  const int n = space.n();
  const double lambda = space.lambda();
  const double nl = n * lambda;
  const double theta_end = half_pi - cfg.end_margin;

  bool bad = false;
  auto rhs = [&](double th, double H) {
    if (!(H > 0.0 && H < std::numbers::pi) || !(th >= 0.0 && th < half_pi)) {
      bad = true;
      return std::numeric_limits<double>::quiet_NaN();
    }
    return nl - (n - 1) * std::tan(th) / std::tan(H);
  };
  auto theta_sys = [&](const state2& x, state2& dxdt, double th) {
    dxdt[0] = rhs(th, x[0]);
    dxdt[1] = -lambda / std::tan(x[0]);
  };
  auto h_sys = [&](const state2& x, state2& dxdt, double H) {
    const double r = rhs(x[0], H);
    dxdt[0] = 1.0 / r;
    dxdt[1] = -lambda / (std::tan(H) * r);
  };

  auto stepper = make_controlled<runge_kutta_dopri5<state2>>(cfg.abs_tol, cfg.rel_tol);

  ShootingOutcome out;
  out.H0 = H0;
  out.theta_end = theta_end;
  double theta = 0.0;
  double H = H0;
  double lf = 0.0;
  auto record = [&] {
    if (cfg.record) {
      out.trajectory.push_back({theta, H, lf});
    }
  };
  auto finish = [&](ExitKind kind, std::string diag = {}) {
    out.kind = kind;
    out.theta_exit = theta;
    out.H_exit = H;
    out.f_end = std::exp(lf);
    out.diagnostics = std::move(diag);
    return out;
  };
  auto stalled = [&](const char* why, double step) {
    char buf[200];
    std::snprintf(buf, sizeof buf, "%s at theta=%.17g H=%.17g step=%.3g", why, theta, H, step);
    return finish(ExitKind::stalled_numeric, buf);
  };
  record();

  // Upward approach to the ceiling with H as the independent variable;
  // H' stays near n lambda there.
  auto locate_ceiling = [&]() {
    auto st = make_controlled<runge_kutta_dopri5<state2>>(cfg.abs_tol, cfg.rel_tol);
    state2 x{theta, lf};
    double s = H;
    double ds = half_pi - H;
    for (int i = 0; i < 100000 && s < half_pi; ++i) {
      const double room = half_pi - s;
      const bool last = ds >= room;
      double step = last ? room : ds;
      const state2 x0 = x;
      const double s0 = s;
      bad = false;
      if (st.try_step(h_sys, x, s, step) == fail) {
        ds = step;
        continue;
      }
      if (bad || !detail::finite2(x) || x[0] >= half_pi) {
        x = x0;
        s = s0;
        st.reset();
        ds = 0.5 * (last ? room : ds);
        continue;
      }
      out.error_bound += cfg.abs_tol + cfg.rel_tol * std::abs(x[0]);
      if (last) {
        s = half_pi;
      }
      ds = step;
    }
    theta = x[0];
    lf = x[1];
    H = half_pi;
  };

  enum class Mode { by_theta, by_h };
  Mode mode = Mode::by_theta;
  bool pinned = false;
  // Set when a theta step would cross the floor; keeps H as the independent
  // variable while H' < -1 even above switch_to_theta.
  bool floor_approach = false;
  double dth = cfg.initial_step;
  double dH = -cfg.initial_step;

  while (true) {
    if (out.steps + out.rejected > cfg.max_steps) {
      return stalled("step budget exhausted", mode == Mode::by_theta ? dth : dH);
    }
    if (mode == Mode::by_theta) {
      if (theta >= theta_end) {
        out.end_deviation = (half_pi - H) - lambda * (half_pi - theta);
        return finish(ExitKind::extends_to_half_pi);
      }
      const double r = h_rhs(theta, H, space);
      if (!pinned && r < cfg.switch_to_h) {
        mode = Mode::by_h;
        stepper.reset();
        dH = -std::min(std::abs(r) * dth, 0.5 * (H - cfg.h_floor));
        continue;
      }
      const bool last = dth >= theta_end - theta;
      double step = last ? theta_end - theta : dth;
      state2 x{H, lf};
      double t = theta;
      bad = false;
      if (stepper.try_step(theta_sys, x, t, step) == fail) {
        ++out.rejected;
        dth = step;
        if (dth < cfg.min_step) {
          return stalled("step underflow", dth);
        }
        continue;
      }
      if (!bad && std::isfinite(x[0]) && x[0] <= cfg.h_floor && !pinned && r < -1.0) {
        ++out.rejected;
        mode = Mode::by_h;
        floor_approach = true;
        stepper.reset();
        dH = -std::min(std::abs(r) * dth, 0.5 * (H - cfg.h_floor));
        continue;
      }
      if (bad || !detail::finite2(x) || x[0] <= cfg.h_floor) {
        ++out.rejected;
        stepper.reset();
        dth = 0.5 * (last ? theta_end - theta : dth);
        if (dth < cfg.min_step) {
          return stalled("step underflow", dth);
        }
        continue;
      }
      if (x[0] >= half_pi) {
        ++out.steps;
        locate_ceiling();
        record();
        return finish(ExitKind::exits_at_ceiling);
      }
      ++out.steps;
      out.error_bound += cfg.abs_tol + cfg.rel_tol * std::abs(x[0]);
      theta = last ? theta_end : t;
      H = x[0];
      lf = x[1];
      record();
      dth = step;
    } else {
      const double r = h_rhs(theta, H, space);
      if (floor_approach ? r > -1.0 : r > cfg.switch_to_theta) {
        floor_approach = false;
        mode = Mode::by_theta;
        stepper.reset();
        dth = std::max(std::abs(dH / r), cfg.min_step);
        continue;
      }
      const double room = cfg.h_floor - H;
      const bool last = dH <= room;
      double step = last ? room : dH;
      state2 x{theta, lf};
      double s = H;
      bad = false;
      if (stepper.try_step(h_sys, x, s, step) == fail) {
        ++out.rejected;
        dH = step;
        if (std::abs(dH) < cfg.min_step * 1e-3) {
          return stalled("step underflow", dH);
        }
        continue;
      }
      if (bad || !detail::finite2(x) || x[0] >= half_pi) {
        ++out.rejected;
        stepper.reset();
        dH = 0.5 * (last ? room : dH);
        if (std::abs(dH) < cfg.min_step * 1e-3) {
          return stalled("step underflow", dH);
        }
        continue;
      }
      if (x[0] > theta_end) {
        // Finish the approach to theta_end with theta as the independent variable.
        stepper.reset();
        mode = Mode::by_theta;
        pinned = true;
        dth = std::max(std::abs(dH / r), cfg.min_step);
        continue;
      }
      ++out.steps;
      out.error_bound += cfg.abs_tol + cfg.rel_tol * std::abs(x[0]);
      theta = x[0];
      lf = x[1];
      H = last ? cfg.h_floor : s;
      record();
      dH = step;
      if (last) {
        return finish(ExitKind::exits_at_floor);
      }
    }
  }
}

/// Bisection over H0 for the shot that reaches pi/2 inside D.
struct ExtendingShot {
  double H0 = 0.0;
  double A = 0.0;
  ShootingOutcome outcome;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  int iterations = 0;
};

namespace detail {

// +1 leans to the ceiling (H0 too large), -1 to the floor (H0 too small).
inline int lean(const ShootingOutcome& o) {
  switch (o.kind) {
  case ExitKind::exits_at_ceiling:
    return 1;
  case ExitKind::exits_at_floor:
    return -1;
  case ExitKind::extends_to_half_pi:
    return o.end_deviation > 0.0 ? -1 : 1;
  case ExitKind::stalled_numeric:
    break;
  }
  throw numeric_error("find_extending_shot: shot stalled: " + o.diagnostics, 0.0);
}

} // namespace detail

/// Returns nullopt when both bracket ends lean the same way.
inline std::optional<ExtendingShot> find_extending_shot(const ConeSpace& space,
                                                        const ShootingConfig& cfg = {},
                                                        double lo = 1e-8,
                                                        double hi = detail::half_pi,
                                                        int max_iterations = 200) {
  if (!(lo > 0.0 && lo < hi && hi <= detail::half_pi)) {
    throw std::invalid_argument("find_extending_shot: need 0 < lo < hi <= pi/2");
  }
  ShootingConfig quiet = cfg;
  quiet.record = false;
  if (detail::lean(shoot(space, lo, quiet)) != -1 || detail::lean(shoot(space, hi, quiet)) != 1) {
    return std::nullopt;
  }
  std::optional<double> best;
  ExtendingShot result;
  for (int it = 0; it < max_iterations; ++it) {
    const double mid = hi / lo > 2.0 ? std::sqrt(lo * hi) : lo + 0.5 * (hi - lo);
    if (!(mid > lo && mid < hi)) {
      break;
    }
    const ShootingOutcome o = shoot(space, mid, quiet);
    if (o.kind == ExitKind::extends_to_half_pi) {
      best = mid;
    }
    (detail::lean(o) < 0 ? lo : hi) = mid;
    result.iterations = it + 1;
  }
  if (!best) {
    return std::nullopt;
  }
  result.H0 = *best;
  result.A = initial_slope(*best, space);
  result.outcome = shoot(space, *best, cfg);
  result.bracket_lo = lo;
  result.bracket_hi = hi;
  return result;
}

// ---------------------------------------------------------------------------
// Profile reconstruction.

/// f(theta) = exp(-lambda \int_0^theta cot H) along a stored trajectory, with H
/// interpolated by cubic Hermite splines (slopes from h_rhs). A trajectory
/// stopping short of pi/2 is closed by the regular end asymptotics
/// pi/2 - H ~ (pi/2 - theta) * K_end / phi_end.
inline RadialProfile reconstruct_f(const std::vector<TrajectoryPoint>& trajectory,
                                   const ConeSpace& space, const QuadratureConfig& cfg = {},
                                   double h_floor = 1e-9) {
  using detail::half_pi;
  if (trajectory.size() < 2 || trajectory.front().theta != 0.0) {
    throw std::invalid_argument("reconstruct_f: trajectory must start at theta = 0");
  }
  std::vector<double> th;
  std::vector<double> hv;
  std::vector<double> dh;
  for (const auto& p : trajectory) {
    if (p.H <= h_floor) {
      throw std::domain_error("reconstruct_f: trajectory touches H = 0 at theta = " +
                              std::to_string(p.theta) + " (vertical tangent)");
    }
    if (p.H > half_pi) {
      throw std::invalid_argument("reconstruct_f: trajectory leaves D through the ceiling");
    }
    if (!th.empty() && !(p.theta > th.back())) {
      continue;
    }
    th.push_back(p.theta);
    hv.push_back(p.H);
    // A trajectory that stays in D only touches the ceiling tangentially.
    dh.push_back(p.theta < half_pi && p.H < half_pi ? h_rhs(p.theta, p.H, space) : 0.0);
  }
  if (th.size() < 2) {
    throw std::invalid_argument("reconstruct_f: trajectory has fewer than two distinct nodes");
  }
  const double lambda = space.lambda();
  const double theta_end = th.back();
  const double K_end = half_pi - hv.back();
  const std::vector<double> nodes = th;

  using hermite_t = boost::math::interpolators::cubic_hermite<std::vector<double>>;
  auto interp = std::make_shared<hermite_t>(std::move(th), std::move(hv), std::move(dh));
  // The Hermite overshoot can poke above pi/2 where H' is large at the ceiling.
  auto H_of = [interp](double t) { return std::min((*interp)(t), half_pi); };
  auto log_f = std::make_shared<CumulativeIntegral>(
      [H_of, lambda](double t) { return -lambda / std::tan(H_of(t)); }, nodes, cfg);

  auto body = RadialProfile::closed_form(
      0.0, theta_end, [log_f](double t) { return std::exp((*log_f)(t)); },
      [log_f, H_of, lambda](double t) {
        return -lambda / std::tan(H_of(t)) * std::exp((*log_f)(t));
      },
      nodes);
  if (theta_end >= half_pi) {
    return body;
  }

  const double f_end = std::exp(log_f->total());
  const double phi_end = half_pi - theta_end;
  const double k = lambda * K_end / phi_end;
  auto cap = RadialProfile::closed_form(
      theta_end, half_pi,
      [f_end, k, phi_end](double t) {
        const double phi = half_pi - t;
        return f_end * std::exp(-0.5 * k * (phi_end * phi_end - phi * phi));
      },
      [f_end, k, phi_end](double t) {
        const double phi = half_pi - t;
        return -k * phi * f_end * std::exp(-0.5 * k * (phi_end * phi_end - phi * phi));
      });
  return RadialProfile::piecewise({body, cap});
}

inline RadialProfile reconstruct_f(const ShootingOutcome& outcome, const ConeSpace& space,
                                   const QuadratureConfig& cfg = {}) {
  switch (outcome.kind) {
  case ExitKind::extends_to_half_pi:
    break;
  case ExitKind::exits_at_floor:
    throw std::domain_error("reconstruct_f: trajectory reaches H = 0 at theta = " +
                            std::to_string(outcome.theta_exit));
  case ExitKind::exits_at_ceiling:
  case ExitKind::stalled_numeric:
    throw std::invalid_argument(std::string("reconstruct_f: trajectory kind ") +
                                to_string(outcome.kind) + " has no profile up to pi/2");
  }
  if (outcome.trajectory.empty()) {
    throw std::invalid_argument("reconstruct_f: shot was run without recording");
  }
  return reconstruct_f(outcome.trajectory, space, cfg);
}

/// Three columns: theta, H, f.
inline void write_trajectory(std::ostream& out, const std::vector<TrajectoryPoint>& trajectory) {
  char buf[96];
  for (const auto& p : trajectory) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", p.theta, p.H, std::exp(p.log_f));
    out << buf;
  }
  if (!out) {
    throw io_error("write_trajectory: stream write failed");
  }
}

} // namespace conemin

#endif // CONEMIN_SHOOTING_HPP
