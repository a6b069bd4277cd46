#ifndef CONEMIN_QUADRATURE_HPP
#define CONEMIN_QUADRATURE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <queue>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "conemin/errors.hpp"

namespace conemin {

struct QuadratureConfig {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_depth = 60;
  // Hard cap on the number of live panels; exceeding it counts as non-convergence.
  std::size_t max_panels = 200000;

  void validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) {
      throw std::invalid_argument("QuadratureConfig: tolerances must be positive");
    }
    if (max_depth < 1) {
      throw std::invalid_argument("QuadratureConfig: max_depth must be >= 1");
    }
  }
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t panels = 0;
};

namespace detail {

struct Panel {
  double a;
  double b;
  double value;
  double error;
  int depth;

  bool operator<(const Panel& other) const { return error < other.error; }
};

template <class F>
Panel gk15_panel(F& f, double a, double b, int depth) {
  using rule = boost::math::quadrature::gauss_kronrod<double, 15>;
  double err = 0.0;
  const double v = rule::integrate(std::ref(f), a, b, 0, 0.0, &err);
  // The single-panel error comes back for the rule mapped to [-1, 1]; scale it
  // to [a, b].
  return Panel{a, b, v, err * 0.5 * (b - a), depth};
}

} // namespace detail

/// Adaptive Gauss-Kronrod (G7/K15) integration of f over [a, b].
///
/// The interval is first cut at every breakpoint that falls strictly inside
/// (a, b); the rule never straddles one. Panels are then bisected globally,
/// largest error estimate first, until the summed estimate drops below
/// max(abs_tol, rel_tol * |I|). Panels at max_depth are frozen. Throws
/// numeric_error carrying the final error estimate when the target cannot
/// be met.
template <class F>
QuadratureResult integrate(F&& f, double a, double b, const QuadratureConfig& cfg = {},
                           std::span<const double> breakpoints = {}) {
  cfg.validate();
  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw std::domain_error("integrate: limits must be finite");
  }
  if (a == b) {
    return {};
  }
  if (a > b) {
    QuadratureResult r = integrate(std::forward<F>(f), b, a, cfg, breakpoints);
    r.value = -r.value;
    return r;
  }

  std::vector<double> cuts{a};
  for (double x : breakpoints) {
    if (x > a && x < b) {
      cuts.push_back(x);
    }
  }
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::priority_queue<detail::Panel> live;
  double frozen_value = 0.0;
  double frozen_error = 0.0;
  double total_value = 0.0;
  double total_error = 0.0;
  std::size_t panels = 0;

  auto admit = [&](const detail::Panel& p) {
    total_value += p.value;
    total_error += p.error;
    ++panels;
    if (p.depth >= cfg.max_depth || p.error == 0.0) {
      frozen_value += p.value;
      frozen_error += p.error;
    } else {
      live.push(p);
    }
  };

  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    admit(detail::gk15_panel(f, cuts[i], cuts[i + 1], 0));
  }

  auto target = [&] { return std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total_value)); };

  while (total_error > target()) {
    if (live.empty() || panels > cfg.max_panels) {
      throw numeric_error("integrate: tolerance not reached", total_error);
    }
    const detail::Panel worst = live.top();
    live.pop();
    total_value -= worst.value;
    total_error -= worst.error;
    --panels;
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      // Interval can no longer be split in floating point.
      frozen_value += worst.value;
      frozen_error += worst.error;
      total_value += worst.value;
      total_error += worst.error;
      ++panels;
      continue;
    }
    admit(detail::gk15_panel(f, worst.a, mid, worst.depth + 1));
    admit(detail::gk15_panel(f, mid, worst.b, worst.depth + 1));
  }

  // Re-sum from scratch to shed the drift of the running totals.
  double value = frozen_value;
  double error = frozen_error;
  while (!live.empty()) {
    value += live.top().value;
    error += live.top().error;
    live.pop();
  }
  if (!std::isfinite(value)) {
    throw numeric_error("integrate: integrand produced a non-finite value", error);
  }
  return {value, error, panels};
}

/// Nodes that are geometric (ratio `growth`) from lo until the spacing
/// reaches `max_step`, then uniform up to hi. Suited to integrands with a
/// 1/t-type profile near a small positive lower limit.
inline std::vector<double> graded_nodes(double lo, double hi, double growth, double max_step) {
  if (!(lo > 0.0) || !(hi > lo) || !(growth > 1.0) || !(max_step > 0.0)) {
    throw std::invalid_argument("graded_nodes: need 0 < lo < hi, growth > 1, max_step > 0");
  }
  std::vector<double> nodes{lo};
  double x = lo;
  while (x < hi) {
    const double step = std::min(x * (growth - 1.0), max_step);
    x = std::min(x + step, hi);
    if (hi - x < 0.25 * step) {
      x = hi;
    }
    nodes.push_back(x);
  }
  return nodes;
}

/// Running integral x -> \int_{x0}^{x} g over a fixed node table.
///
/// Node-to-node panels are integrated once at construction; an evaluation
/// costs one short adaptive integral from the nearest node below x.
class CumulativeIntegral {
public:
  CumulativeIntegral() = default;

  CumulativeIntegral(std::function<double(double)> integrand, std::vector<double> nodes,
                     QuadratureConfig cfg = {})
      : integrand_(std::move(integrand)), nodes_(std::move(nodes)), cfg_(cfg) {
    if (nodes_.size() < 2 || !std::is_sorted(nodes_.begin(), nodes_.end())) {
      throw std::invalid_argument("CumulativeIntegral: need at least two increasing nodes");
    }
    // Each panel gets a share of the absolute budget so the table total keeps it.
    QuadratureConfig panel_cfg = cfg_;
    panel_cfg.abs_tol = cfg_.abs_tol / static_cast<double>(nodes_.size());
    cumulative_.assign(nodes_.size(), 0.0);
    for (std::size_t i = 1; i < nodes_.size(); ++i) {
      cumulative_[i] =
          cumulative_[i - 1] + integrate(integrand_, nodes_[i - 1], nodes_[i], panel_cfg).value;
    }
    cfg_ = panel_cfg;
  }

  double lower() const { return nodes_.front(); }
  double upper() const { return nodes_.back(); }
  double total() const { return cumulative_.back(); }

  double operator()(double x) const {
    if (x < nodes_.front() || x > nodes_.back()) {
      throw std::domain_error("CumulativeIntegral: argument outside the node table");
    }
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
    const std::size_t k = static_cast<std::size_t>(std::distance(nodes_.begin(), it)) - 1;
    if (k + 1 >= nodes_.size()) {
      return cumulative_.back();
    }
    if (x == nodes_[k]) {
      return cumulative_[k];
    }
    return cumulative_[k] + integrate(integrand_, nodes_[k], x, cfg_).value;
  }

  const std::function<double(double)>& integrand() const { return integrand_; }

private:
  std::function<double(double)> integrand_;
  std::vector<double> nodes_;
  std::vector<double> cumulative_;
  QuadratureConfig cfg_;
};

} // namespace conemin

#endif // CONEMIN_QUADRATURE_HPP
