#ifndef CONEMIN_RADIAL_PROFILE_HPP
#define CONEMIN_RADIAL_PROFILE_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <istream>
#include <memory>
#include <numbers>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/interpolators/pchip.hpp>

#include "conemin/errors.hpp"
#include "conemin/quadrature.hpp"

namespace conemin {

enum class ProfileKind { closed_form, sampled, piecewise };

/// A positive scalar profile x -> f(x) on a closed interval, with its slope.
///
/// Used both for radial graphs r = f(theta) over the polar angle and for the
/// distance-to-equator parametrization r = f(t). Immutable; copies share
/// the underlying representation. Derivative jumps are only allowed at the
/// declared breakpoints, which every integrator in this library splits at.
class RadialProfile {
public:
  using Fn = std::function<double(double)>;

  static RadialProfile closed_form(double lo, double hi, Fn value, Fn slope,
                                   std::vector<double> breakpoints = {}) {
    if (!(hi > lo)) {
      throw std::invalid_argument("RadialProfile: empty domain");
    }
    auto impl = std::make_shared<Impl>();
    impl->kind = ProfileKind::closed_form;
    impl->pieces.push_back({lo, hi, std::move(value), std::move(slope)});
    impl->breakpoints = std::move(breakpoints);
    RadialProfile p{std::move(impl)};
    p.finish();
    return p;
  }

  /// Monotone cubic (PCHIP) interpolation of tabulated samples.
  static RadialProfile sampled(std::vector<double> x, std::vector<double> f) {
    if (x.size() != f.size()) {
      throw std::invalid_argument("RadialProfile::sampled: column lengths differ");
    }
    if (x.size() < 4) {
      throw std::invalid_argument("RadialProfile::sampled: need at least 4 samples");
    }
    for (std::size_t i = 1; i < x.size(); ++i) {
      if (!(x[i] > x[i - 1])) {
        throw std::invalid_argument("RadialProfile::sampled: abscissae must be strictly increasing");
      }
    }
    const double lo = x.front();
    const double hi = x.back();
    using interp_t = boost::math::interpolators::pchip<std::vector<double>>;
    auto interp = std::make_shared<interp_t>(std::move(x), std::move(f));
    auto impl = std::make_shared<Impl>();
    impl->kind = ProfileKind::sampled;
    impl->pieces.push_back({lo, hi, [interp](double t) { return (*interp)(t); },
                            [interp](double t) { return interp->prime(t); }});
    RadialProfile p{std::move(impl)};
    p.finish();
    return p;
  }

  /// Concatenation of profiles on abutting domains; values must agree at
  /// each junction to 1e-12.
  static RadialProfile piecewise(const std::vector<RadialProfile>& parts) {
    if (parts.empty()) {
      throw std::invalid_argument("RadialProfile::piecewise: no pieces");
    }
    auto impl = std::make_shared<Impl>();
    impl->kind = ProfileKind::piecewise;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      const Impl& src = *parts[i].impl_;
      if (i > 0) {
        const double junction = parts[i].lower();
        if (std::abs(junction - parts[i - 1].upper()) > 1e-12 * std::max(1.0, std::abs(junction))) {
          throw std::invalid_argument("RadialProfile::piecewise: domains do not abut");
        }
        const double left = parts[i - 1].value(parts[i - 1].upper());
        const double right = parts[i].value(junction);
        if (std::abs(left - right) > 1e-12) {
          throw std::invalid_argument("RadialProfile::piecewise: discontinuous at junction " +
                                      std::to_string(junction));
        }
        impl->breakpoints.push_back(junction);
      }
      impl->pieces.insert(impl->pieces.end(), src.pieces.begin(), src.pieces.end());
      impl->breakpoints.insert(impl->breakpoints.end(), src.breakpoints.begin(),
                               src.breakpoints.end());
    }
    RadialProfile p{std::move(impl)};
    p.finish();
    return p;
  }

  double lower() const { return impl_->pieces.front().lo; }
  double upper() const { return impl_->pieces.back().hi; }
  ProfileKind kind() const { return impl_->kind; }
  std::span<const double> breakpoints() const { return impl_->breakpoints; }

  bool covers(double lo, double hi, double tol = 1e-12) const {
    return lower() <= lo + tol && upper() >= hi - tol;
  }

  double value(double x) const { return piece_at(x).value(x); }

  /// Right-sided slope at junctions; left-sided at the upper end.
  double slope(double x) const { return piece_at(x).slope(x); }

  RadialProfile scaled(double c) const {
    if (!(c > 0.0)) {
      throw std::invalid_argument("RadialProfile::scaled: factor must be positive");
    }
    auto impl = std::make_shared<Impl>(*impl_);
    for (auto& piece : impl->pieces) {
      piece.value = [c, v = piece.value](double x) { return c * v(x); };
      piece.slope = [c, s = piece.slope](double x) { return c * s(x); };
    }
    return RadialProfile{std::move(impl)};
  }

private:
  struct Piece {
    double lo;
    double hi;
    Fn value;
    Fn slope;
  };

  struct Impl {
    ProfileKind kind = ProfileKind::closed_form;
    std::vector<Piece> pieces;
    std::vector<double> breakpoints;
  };

  explicit RadialProfile(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

  void finish() {
    auto impl = std::make_shared<Impl>(*impl_);
    auto& bp = impl->breakpoints;
    const double lo = lower();
    const double hi = upper();
    bp.erase(std::remove_if(bp.begin(), bp.end(), [&](double x) { return !(x > lo && x < hi); }),
             bp.end());
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
    impl_ = std::move(impl);

    // Positivity on the interior, checked on a fixed probe grid.
    constexpr int probes = 64;
    for (int i = 1; i < probes; ++i) {
      const double x = lo + (hi - lo) * i / probes;
      const double v = value(x);
      if (!(v > 0.0) || !std::isfinite(v)) {
        throw std::invalid_argument("RadialProfile: profile must be positive and finite, f(" +
                                    std::to_string(x) + ") = " + std::to_string(v));
      }
    }
  }

  const Piece& piece_at(double x) const {
    const auto& pieces = impl_->pieces;
    if (x < pieces.front().lo || x > pieces.back().hi) {
      throw std::domain_error("RadialProfile: argument " + std::to_string(x) +
                              " outside the profile domain");
    }
    for (const auto& piece : pieces) {
      if (x < piece.hi) {
        return piece;
      }
    }
    return pieces.back();
  }

  std::shared_ptr<const Impl> impl_;
};

/// Level-set length L(t) of the distance-t set from the equator of the
/// cross-section, with its running area F(t) = \int_0^t L.
class LengthProfile {
public:
  /// Round sphere with constant curvature kappa^2: L(t) = L0 cos(kappa t),
  /// F(t) = L0 sin(kappa t) / kappa, supported on [0, pi / (2 kappa)].
  static LengthProfile round_sphere(double L0, double kappa = 1.0) {
    if (!(L0 > 0.0) || !(kappa > 0.0)) {
      throw std::invalid_argument("LengthProfile::round_sphere: L0 and kappa must be positive");
    }
    LengthProfile p;
    p.L0_ = L0;
    p.support_end_ = std::numbers::pi / (2.0 * kappa);
    const double end = p.support_end_;
    p.length_ = [L0, kappa, end](double t) { return t >= end ? 0.0 : L0 * std::cos(kappa * t); };
    p.area_ = [L0, kappa, end](double t) { return L0 * std::sin(kappa * std::min(t, end)) / kappa; };
    return p;
  }

  /// Tabulated L on nodes starting at t = 0; L vanishes beyond the last node.
  /// Rejects tables that break L <= L(0) or the comparison
  /// F'(t)^2 + F(t)^2 <= L(0)^2 (relative slack `slack`).
  static LengthProfile tabulated(std::vector<double> t, std::vector<double> L, double slack = 1e-8,
                                 QuadratureConfig cfg = {}) {
    if (t.size() != L.size() || t.size() < 4) {
      throw std::invalid_argument("LengthProfile::tabulated: need >= 4 matching samples");
    }
    if (t.front() != 0.0) {
      throw std::invalid_argument("LengthProfile::tabulated: first node must be t = 0");
    }
    for (std::size_t i = 1; i < t.size(); ++i) {
      if (!(t[i] > t[i - 1])) {
        throw std::invalid_argument("LengthProfile::tabulated: nodes must be strictly increasing");
      }
    }
    const double L0 = L.front();
    if (!(L0 > 0.0)) {
      throw std::invalid_argument("LengthProfile::tabulated: L(0) must be positive");
    }
    for (double v : L) {
      if (v < 0.0 || v > L0 * (1.0 + slack)) {
        throw std::invalid_argument("LengthProfile::tabulated: need 0 <= L(t) <= L(0)");
      }
    }
    const std::vector<double> nodes = t;
    const std::vector<double> values = L;
    using interp_t = boost::math::interpolators::pchip<std::vector<double>>;
    auto interp = std::make_shared<interp_t>(std::move(t), std::move(L));

    LengthProfile p;
    p.L0_ = L0;
    p.support_end_ = nodes.back();
    const double end = p.support_end_;
    p.length_ = [interp, end](double s) { return s >= end ? 0.0 : std::max(0.0, (*interp)(s)); };
    auto cumulative = std::make_shared<CumulativeIntegral>(p.length_, nodes, cfg);
    p.area_ = [cumulative, end](double s) { return (*cumulative)(std::min(s, end)); };

    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const double F = p.area_(nodes[i]);
      if (values[i] * values[i] + F * F > L0 * L0 * (1.0 + slack)) {
        throw std::invalid_argument(
            "LengthProfile::tabulated: table violates F'(t)^2 + F(t)^2 <= L(0)^2 at t = " +
            std::to_string(nodes[i]));
      }
    }
    return p;
  }

  double L0() const { return L0_; }
  double support_end() const { return support_end_; }
  double operator()(double t) const { return length_(t); }
  double area_within(double t) const { return area_(t); }
  double total_area() const { return area_(support_end_); }

private:
  LengthProfile() = default;

  double L0_ = 0.0;
  double support_end_ = 0.0;
  std::function<double(double)> length_;
  std::function<double(double)> area_;
};

// ---------------------------------------------------------------------------
// Two-column text format: one "x f" pair per line, x strictly increasing.
// Blank lines and lines starting with '#' are ignored.

inline RadialProfile read_profile(std::istream& in) {
  std::vector<double> x;
  std::vector<double> f;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') {
      continue;
    }
    std::istringstream fields(line);
    double a = 0.0;
    double b = 0.0;
    std::string extra;
    if (!(fields >> a >> b) || (fields >> extra)) {
      throw io_error("profile line " + std::to_string(lineno) + ": expected two numbers");
    }
    if (!x.empty() && !(a > x.back())) {
      throw io_error("profile line " + std::to_string(lineno) + ": abscissa not increasing");
    }
    x.push_back(a);
    f.push_back(b);
  }
  return RadialProfile::sampled(std::move(x), std::move(f));
}

inline RadialProfile read_profile(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw io_error("cannot open profile file " + path);
  }
  return read_profile(in);
}

inline void write_profile(std::ostream& out, std::span<const double> x, std::span<const double> f) {
  if (x.size() != f.size()) {
    throw std::invalid_argument("write_profile: column lengths differ");
  }
  char buf[64];
  for (std::size_t i = 0; i < x.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g\n", x[i], f[i]);
    out << buf;
  }
  if (!out) {
    throw io_error("write_profile: stream write failed");
  }
}

/// Samples the profile at `samples` equally spaced points, endpoints included.
inline void write_profile(std::ostream& out, const RadialProfile& profile, std::size_t samples) {
  if (samples < 2) {
    throw std::invalid_argument("write_profile: need at least 2 samples");
  }
  std::vector<double> x(samples);
  std::vector<double> f(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    x[i] = i + 1 == samples ? profile.upper()
                            : profile.lower() + (profile.upper() - profile.lower()) *
                                                    static_cast<double>(i) / (samples - 1);
    f[i] = profile.value(x[i]);
  }
  write_profile(out, x, f);
}

} // namespace conemin

#endif // CONEMIN_RADIAL_PROFILE_HPP
