#ifndef CONEMIN_STABILITY_HPP
#define CONEMIN_STABILITY_HPP

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

namespace conemin {

/// Piecewise linear cut-off eta = r/eps on [0, eps], 1 on [eps, R],
/// 2 - r/R on [R, 2R], 0 beyond. Stored through ln(R/eps), since the ratios
/// needed for lambda near 1 overflow a double.
struct TestFunctionEta {
  double epsilon = 1.0;
  double log_ratio = 1.0;

  static TestFunctionEta from_radii(double epsilon, double R) {
    if (!(epsilon > 0.0) || !(R > epsilon)) {
      throw std::invalid_argument("TestFunctionEta: need 0 < epsilon < R");
    }
    return {epsilon, std::log(R / epsilon)};
  }

  double R() const { return epsilon * std::exp(log_ratio); }

  double operator()(double r) const {
    const double big_r = R();
    if (r <= epsilon) {
      return r / epsilon;
    }
    if (r <= big_r) {
      return 1.0;
    }
    if (r <= 2.0 * big_r) {
      return 2.0 - r / big_r;
    }
    return 0.0;
  }
};

namespace detail {

inline void require_radius(double lambda) {
  if (!(lambda > 0.0 && lambda <= 1.0)) {
    throw std::invalid_argument("stability: lambda must lie in (0, 1]");
  }
}

} // namespace detail

/// C(lambda) ln(R/eps) - 2 with C(lambda) = (1 - lambda^2)/lambda^2: the
/// curvature term minus the gradient term of the stability inequality for the
/// 2-dimensional cone, after the common factor of the slice length is
/// cancelled. Positive means the inequality fails.
inline double stability_gap(double lambda, const TestFunctionEta& eta) {
  detail::require_radius(lambda);
  if (!(eta.epsilon > 0.0) || !(eta.log_ratio > 0.0)) {
    throw std::invalid_argument("stability_gap: need epsilon > 0 and R > epsilon");
  }
  const double l2 = lambda * lambda;
  return (1.0 - l2) / l2 * eta.log_ratio - 2.0;
}

/// ln(R/eps) at which the gap vanishes: 2 lambda^2 / (1 - lambda^2).
inline double critical_log_ratio(double lambda) {
  detail::require_radius(lambda);
  if (lambda == 1.0) {
    return std::numeric_limits<double>::infinity();
  }
  const double l2 = lambda * lambda;
  return 2.0 * l2 / (1.0 - l2);
}

struct InstabilityCertificate {
  TestFunctionEta eta;
  double gap;
};

/// eta with ln(R/eps) one unit past the critical value; none for lambda = 1.
inline std::optional<InstabilityCertificate> instability_certificate(double lambda) {
  detail::require_radius(lambda);
  if (lambda == 1.0) {
    return std::nullopt;
  }
  TestFunctionEta eta{1.0, critical_log_ratio(lambda) + 1.0};
  return InstabilityCertificate{eta, stability_gap(lambda, eta)};
}

/// |A|^2 of Sigma given |A'|^2 of the rescaled Sigma' = Sigma / lambda.
inline double scale_second_fundamental(double A_sq, double lambda) {
  detail::require_radius(lambda);
  if (A_sq < 0.0) {
    throw std::invalid_argument("scale_second_fundamental: |A'|^2 must be >= 0");
  }
  return A_sq / (lambda * lambda);
}

} // namespace conemin

#endif // CONEMIN_STABILITY_HPP
