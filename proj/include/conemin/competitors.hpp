#ifndef CONEMIN_COMPETITORS_HPP
#define CONEMIN_COMPETITORS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "conemin/area_functionals.hpp"
#include "conemin/cone_geometry.hpp"
#include "conemin/errors.hpp"
#include "conemin/quadrature.hpp"
#include "conemin/radial_profile.hpp"

namespace conemin {

// ---------------------------------------------------------------------------
// Catenoid cap: f cos t = a cosh((f sin t - b)/a) on [0, delta] with
// f(0) = 1 and f(delta) = alpha.

struct CatenoidParams {
  double delta = 0.0;
  double alpha = 0.0;
  double a = 0.0;
  double b = 0.0;
  double residual_origin = 0.0;
  double residual_junction = 0.0;
  int iterations = 0;
};

namespace detail {

inline std::array<double, 2> catenoid_residual(double a, double b, double delta, double alpha) {
  return {a * std::cosh(-b / a) - 1.0,
          a * std::cosh((alpha * std::sin(delta) - b) / a) - alpha * std::cos(delta)};
}

// The system reduced to a by b = a arccosh(1/a), on the branch where the
// junction sits below the catenoid axis.
inline double catenoid_reduced(double a, double delta, double alpha) {
  return alpha * std::sin(delta) / a - std::acosh(1.0 / a) +
         std::acosh(alpha * std::cos(delta) / a);
}

} // namespace detail

/// Solves for (a, b) by damped Newton from a0 = alpha delta / (-ln alpha),
/// b0 = a0 arccosh(1/a0). Returns nullopt when the reduced equation has no
/// sign change on (0, alpha cos delta), i.e. no catenoid joins the two
/// boundary circles.
inline std::optional<CatenoidParams> solve_catenoid(double delta, double alpha) {
  if (!(delta > 0.0 && delta < 0.25 * std::numbers::pi)) {
    throw std::invalid_argument("solve_catenoid: delta must lie in (0, pi/4)");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("solve_catenoid: alpha must lie in (0, 1)");
  }
  const double a_max = alpha * std::cos(delta);
  {
    constexpr int probes = 400;
    bool sign_change = false;
    double prev = detail::catenoid_reduced(a_max * 1e-12, delta, alpha);
    for (int i = 1; i <= probes && !sign_change; ++i) {
      const double a = a_max * std::pow(10.0, -12.0 + 12.0 * i / probes) * (i == probes ? 1.0 - 1e-15 : 1.0);
      const double cur = detail::catenoid_reduced(a, delta, alpha);
      sign_change = (prev > 0.0) != (cur > 0.0);
      prev = cur;
    }
    if (!sign_change) {
      return std::nullopt;
    }
  }

  double a = alpha * delta / (-std::log(alpha));
  if (!(a < a_max)) {
    a = 0.5 * a_max;
  }
  double b = a * std::acosh(1.0 / a);
  auto F = detail::catenoid_residual(a, b, delta, alpha);
  auto norm = [](const std::array<double, 2>& r) { return std::max(std::abs(r[0]), std::abs(r[1])); };

  const double xs = alpha * std::sin(delta);
  int it = 0;
  for (; it < 100 && norm(F) > 1e-14; ++it) {
    const double w1 = -b / a;
    const double w2 = (xs - b) / a;
    const double j11 = std::cosh(w1) - w1 * std::sinh(w1);
    const double j12 = -std::sinh(w1);
    const double j21 = std::cosh(w2) - w2 * std::sinh(w2);
    const double j22 = -std::sinh(w2);
    const double det = j11 * j22 - j12 * j21;
    if (!(std::abs(det) > 0.0) || !std::isfinite(det)) {
      throw numeric_error("solve_catenoid: singular Jacobian", norm(F));
    }
    const double da = -(F[0] * j22 - F[1] * j12) / det;
    const double db = -(j11 * F[1] - j21 * F[0]) / det;
    double step = 1.0;
    bool moved = false;
    for (int halving = 0; halving < 60; ++halving, step *= 0.5) {
      const double a1 = a + step * da;
      const double b1 = b + step * db;
      if (!(a1 > 0.0)) {
        continue;
      }
      const auto F1 = detail::catenoid_residual(a1, b1, delta, alpha);
      if (std::isfinite(F1[0]) && std::isfinite(F1[1]) && norm(F1) < norm(F)) {
        a = a1;
        b = b1;
        F = F1;
        moved = true;
        break;
      }
    }
    if (!moved) {
      break;
    }
  }
  if (!(norm(F) <= 1e-12)) {
    throw numeric_error("solve_catenoid: Newton did not converge", norm(F));
  }
  CatenoidParams p;
  p.delta = delta;
  p.alpha = alpha;
  p.a = a;
  p.b = b;
  p.residual_origin = F[0];
  p.residual_junction = F[1];
  p.iterations = it;
  return p;
}

/// Area of the catenoid cap over a round cross-section with L(t) = L0 cos t.
inline double catenoid_area_closed_form(const CatenoidParams& p, double L0) {
  const double s = p.a / (p.alpha * std::cos(p.delta));
  if (!(s >= -1.0 && s <= 1.0)) {
    throw std::domain_error("catenoid_area_closed_form: a / (alpha cos delta) outside [-1, 1]");
  }
  return 0.5 * L0 *
         (std::sqrt(1.0 - p.a * p.a) -
          p.alpha * p.alpha * std::cos(p.delta) * std::cos(p.delta + std::asin(s)));
}

/// The cap as a profile over t in [0, delta]: f(t) is the root of
/// G(f) = f cos t - a cosh((f sin t - b)/a) below the axis, and
/// f' = -G_t / G_f.
inline RadialProfile catenoid_profile(const CatenoidParams& p) {
  const double a = p.a;
  const double b = p.b;
  auto value = [a, b](double t) {
    if (t == 0.0) {
      return 1.0;
    }
    const double st = std::sin(t);
    const double ct = std::cos(t);
    auto G = [&](double f) { return f * ct - a * std::cosh((f * st - b) / a); };
    const double hi = std::min(2.0, b / st);
    std::uintmax_t iters = 200;
    auto tol = boost::math::tools::eps_tolerance<double>(53);
    const auto r = boost::math::tools::toms748_solve(G, 0.0, hi, G(0.0), G(hi), tol, iters);
    return 0.5 * (r.first + r.second);
  };
  auto slope = [a, b, value](double t) {
    const double f = value(t);
    const double st = std::sin(t);
    const double ct = std::cos(t);
    const double sh = std::sinh((f * st - b) / a);
    const double Gt = -f * st - sh * f * ct;
    const double Gf = ct - sh * st;
    return -Gt / Gf;
  };
  return RadialProfile::closed_form(0.0, p.delta, value, slope);
}

// ---------------------------------------------------------------------------
// Disk: f(t) = alpha exp(-g(t)), g(t) = \int_delta^t L / sqrt(L0^2 - L^2).

struct DiskCompetitor {
  RadialProfile profile;
  double f_end;
  double area;
};

inline DiskCompetitor disk_profile(double delta, double alpha, const LengthProfile& L,
                                   const QuadratureConfig& cfg = {}) {
  const double end = L.support_end();
  if (!(delta > 0.0 && delta < end)) {
    throw std::invalid_argument("disk_profile: delta must lie inside the support of L");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("disk_profile: alpha must lie in (0, 1)");
  }
  const double L0 = L.L0();
  auto g_prime = [L, L0](double s) {
    const double l = L(s);
    return l / std::sqrt((L0 - l) * (L0 + l));
  };
  const auto nodes = graded_nodes(delta, end, 1.5, 0.05);
  for (double s : nodes) {
    if (!(L(s) < L0)) {
      throw numeric_error("disk_profile: L(s) reaches L(0) at s = " + std::to_string(s) +
                              ", integrand singular",
                          L(s) - L0);
    }
  }
  auto g = std::make_shared<CumulativeIntegral>(g_prime, nodes, cfg);
  auto profile = RadialProfile::closed_form(
      delta, end, [g, alpha](double t) { return alpha * std::exp(-(*g)(t)); },
      [g, g_prime, alpha](double t) { return -g_prime(t) * alpha * std::exp(-(*g)(t)); }, nodes);
  const double f_end = alpha * std::exp(-g->total());
  return {profile, f_end, 0.5 * L0 * (alpha * alpha - f_end * f_end)};
}

/// Upper bound 1/2 L0 (alpha^2 - alpha^2 F(delta)^2 / F^2) obtained from
/// F'^2 + F^2 <= L0^2.
inline double disk_area_bound(double delta, double alpha, const LengthProfile& L) {
  const double ratio = L.area_within(delta) / L.total_area();
  return 0.5 * L.L0() * alpha * alpha * (1.0 - ratio * ratio);
}

// ---------------------------------------------------------------------------
// The exponential / integral-profile competitor in C(S^n(lambda)):
// f = exp(-mu theta) on [0, delta], alpha exp(-lambda g(theta)) after, with
// mu = -ln(alpha)/delta and g(theta) = \int_delta^theta dt / sqrt(cos^{2-2n} t - 1).

struct Sec5Competitor {
  ConeSpace space;
  double delta;
  double alpha;
  double mu;
};

inline Sec5Competitor make_sec5_competitor(const ConeSpace& space, double delta, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("sec5 competitor: alpha must lie in (0, 1)");
  }
  if (!(delta > 0.0 && delta < 0.5 * std::numbers::pi)) {
    throw std::invalid_argument("sec5 competitor: delta must lie in (0, pi/2)");
  }
  return {space, delta, alpha, -std::log(alpha) / delta};
}

namespace detail {

// 1 / sqrt(cos^{2-2n} t - 1), without cancellation near t = 0.
inline double sec5_g_prime(double t, int n) {
  double q;
  if (t < 0.25 * std::numbers::pi) {
    const double s = std::sin(t);
    q = std::expm1(-(n - 1) * std::log1p(-s * s));
  } else {
    q = std::pow(std::cos(t), 2 - 2 * n) - 1.0;
  }
  return 1.0 / std::sqrt(q);
}

} // namespace detail

inline RadialProfile sec5_profile(const Sec5Competitor& c, const QuadratureConfig& cfg = {}) {
  const int n = c.space.n();
  const double lambda = c.space.lambda();
  const double mu = c.mu;
  const double alpha = c.alpha;
  constexpr double half_pi = 0.5 * std::numbers::pi;
  auto cap = RadialProfile::closed_form(
      0.0, c.delta, [mu](double t) { return std::exp(-mu * t); },
      [mu](double t) { return -mu * std::exp(-mu * t); });
  const auto nodes = graded_nodes(c.delta, half_pi, 2.0, 0.05);
  auto gp = [n](double t) { return detail::sec5_g_prime(t, n); };
  auto g = std::make_shared<CumulativeIntegral>(gp, nodes, cfg);
  auto tail = RadialProfile::closed_form(
      c.delta, half_pi, [g, alpha, lambda](double t) { return alpha * std::exp(-lambda * (*g)(t)); },
      [g, gp, alpha, lambda](double t) {
        return -lambda * gp(t) * alpha * std::exp(-lambda * (*g)(t));
      },
      nodes);
  return RadialProfile::piecewise({cap, tail});
}

/// Closed-form upper bound on S of the competitor:
/// (1/n)(1 - alpha^n) sqrt(1 + lambda^2 delta^2 / ln^2 alpha) + (1/n) alpha^n
///   - (1/n) alpha^n (sin delta)^{n lambda / sqrt(n-1)}.
inline double sec5_bound(const ConeSpace& space, double delta, double alpha) {
  const int n = space.n();
  const double lambda = space.lambda();
  const double an = std::pow(alpha, n);
  const double la = std::log(alpha);
  const double p = n * lambda / std::sqrt(n - 1.0);
  return ((1.0 - an) * std::sqrt(1.0 + lambda * lambda * delta * delta / (la * la)) + an -
          an * std::pow(std::sin(delta), p)) /
         n;
}

/// 1/n - sec5_bound in extended precision, with delta given by its logarithm
/// so that junctions far below the double range can be examined:
/// (1/n)[alpha^n sin(delta)^p - (1 - alpha^n) x / (sqrt(1 + x) + 1)],
/// x = lambda^2 delta^2 / ln^2 alpha.
inline long double sec5_margin(const ConeSpace& space, long double log_delta, long double alpha) {
  const int n = space.n();
  const long double lambda = space.lambda();
  const long double an = std::pow(alpha, static_cast<long double>(n));
  const long double la = std::log(alpha);
  const long double p = n * lambda / std::sqrt(static_cast<long double>(n - 1));
  const long double delta = std::exp(log_delta);
  const long double log_sin = log_delta + std::log(std::sin(delta) / delta);
  const long double x = lambda * lambda * delta * delta / (la * la);
  const long double gain = an * std::exp(p * log_sin);
  const long double loss = (1.0L - an) * x / (std::sqrt(1.0L + x) + 1.0L);
  return (gain - loss) / n;
}

inline double sec5_area_numeric(const ConeSpace& space, double delta, double alpha,
                                const QuadratureConfig& cfg = {}) {
  return s_functional(sec5_profile(make_sec5_competitor(space, delta, alpha), cfg), space, cfg);
}

// ---------------------------------------------------------------------------
// Search over (alpha, delta).

struct CompetitorSearchResult {
  bool found = false;
  double alpha = 0.0;
  long double log_delta = 0.0L;
  long double margin = -std::numeric_limits<long double>::infinity();
  std::size_t evaluations = 0;

  /// May underflow to 0 for deep junctions.
  double delta() const { return static_cast<double>(std::exp(log_delta)); }
  long double value(int n) const { return 1.0L / n - margin; }
};

struct CompetitorSearchConfig {
  std::size_t budget = 1000;
  int alpha_points = 12;
  double alpha_lo = 1e-4;
  double alpha_hi = 0.9;
  int delta_points = 16;
  double delta_lo = 1e-6;
  double delta_hi = 0.3;
  // Extra junctions with -ln(delta) log-spaced from -ln(delta_lo) up to deep_log_max.
  int deep_points = 16;
  double deep_log_max = 4000.0;
  int refinements = 2;
};

/// Maximizes sec5_margin over a log-spaced grid followed by local 5x5
/// refinement in (ln alpha, ln(-ln delta)). Deterministic.
inline CompetitorSearchResult competitor_search(const ConeSpace& space,
                                                const CompetitorSearchConfig& cfg = {}) {
  if (cfg.alpha_points < 2 || cfg.delta_points < 2 || cfg.deep_points < 0 || cfg.refinements < 0) {
    throw std::invalid_argument("competitor_search: invalid grid sizes");
  }
  if (!(0.0 < cfg.alpha_lo && cfg.alpha_lo < cfg.alpha_hi && cfg.alpha_hi < 1.0) ||
      !(0.0 < cfg.delta_lo && cfg.delta_lo < cfg.delta_hi && cfg.delta_hi < 1.0)) {
    throw std::invalid_argument("competitor_search: invalid grid ranges");
  }
  CompetitorSearchResult best;
  auto evaluate = [&](double ln_alpha, long double u) {
    if (best.evaluations >= cfg.budget) {
      return;
    }
    const double alpha = std::exp(ln_alpha);
    const long double log_delta = -std::exp(u);
    ++best.evaluations;
    const long double m = sec5_margin(space, log_delta, alpha);
    if (m > best.margin) {
      best.margin = m;
      best.alpha = alpha;
      best.log_delta = log_delta;
    }
  };

  const double la0 = std::log(cfg.alpha_lo);
  const double la1 = std::log(cfg.alpha_hi);
  const double h_alpha = (la1 - la0) / (cfg.alpha_points - 1);
  // u = ln(-ln delta); u_lo corresponds to delta_hi.
  const double u_lo = std::log(-std::log(cfg.delta_hi));
  const double u_mid = std::log(-std::log(cfg.delta_lo));
  const double u_hi = std::log(cfg.deep_log_max);
  std::vector<long double> us;
  for (int j = 0; j < cfg.delta_points; ++j) {
    // Log-spaced in delta.
    const double ld = std::log(cfg.delta_hi) +
                      (std::log(cfg.delta_lo) - std::log(cfg.delta_hi)) * j / (cfg.delta_points - 1);
    us.push_back(std::log(-ld));
  }
  for (int j = 1; j <= cfg.deep_points; ++j) {
    us.push_back(u_mid + (u_hi - u_mid) * j / cfg.deep_points);
  }
  for (int i = 0; i < cfg.alpha_points; ++i) {
    for (long double u : us) {
      evaluate(la0 + h_alpha * i, u);
    }
  }

  double h_u = cfg.deep_points > 0 ? (u_hi - u_mid) / cfg.deep_points : (u_mid - u_lo) / 4.0;
  double ha = h_alpha;
  for (int round = 0; round < cfg.refinements; ++round) {
    ha *= 0.5;
    h_u *= 0.5;
    const double ca = std::log(best.alpha);
    const long double cu = std::log(-best.log_delta);
    for (int i = -2; i <= 2; ++i) {
      for (int j = -2; j <= 2; ++j) {
        if (i == 0 && j == 0) {
          continue;
        }
        const double la = std::min(ca + i * ha, std::log1p(-1e-12));
        const long double u = std::clamp<long double>(cu + j * h_u, -5.0L, u_hi);
        evaluate(la, u);
      }
    }
  }
  best.found = best.margin > 0.0L;
  return best;
}

} // namespace conemin

#endif // CONEMIN_COMPETITORS_HPP
