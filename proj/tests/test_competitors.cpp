#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "conemin/area_functionals.hpp"
#include "conemin/competitors.hpp"

using namespace conemin;

namespace {

constexpr double pi = std::numbers::pi;
constexpr double two_pi = 2.0 * pi;

// Neck radius by bisection on the scalar equation obtained from
// a cosh(b/a) = 1 and a cosh((alpha sin delta - b)/a) = alpha cos delta,
// taking the root closest to alpha delta / (-ln alpha).
double neck_radius_oracle(double delta, double alpha) {
  auto g = [&](double a) {
    return alpha * std::sin(delta) / a - std::acosh(1.0 / a) +
           std::acosh(alpha * std::cos(delta) / a);
  };
  const double guess = alpha * delta / -std::log(alpha);
  double lo = 0.5 * guess;
  double hi = std::min(2.0 * guess, alpha * std::cos(delta));
  EXPECT_LT(g(lo) * g(hi), 0.0);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    ((g(mid) > 0.0) == (g(lo) > 0.0) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

} // namespace

TEST(Catenoid, SolvesBoundaryConditions) {
  const auto p = solve_catenoid(0.01, 0.5);
  ASSERT_TRUE(p);
  EXPECT_NEAR(p->a, 0.00721, 5e-6);
  EXPECT_GT(p->b, 0.0);
  EXPECT_LT(std::abs(p->residual_origin), 1e-12);
  EXPECT_LT(std::abs(p->residual_junction), 1e-12);
  // f(0) = 1 and f(delta) = alpha on the catenoid x = a cosh((y - b)/a).
  EXPECT_NEAR(p->a * std::cosh(p->b / p->a), 1.0, 1e-12);
  EXPECT_NEAR(p->a * std::cosh((0.5 * std::sin(0.01) - p->b) / p->a), 0.5 * std::cos(0.01), 1e-12);
}

TEST(Catenoid, AgreesWithScalarOracle) {
  for (double delta : {0.05, 0.01, 1e-3}) {
    for (double alpha : {0.2, 0.5, 0.8}) {
      const auto p = solve_catenoid(delta, alpha);
      ASSERT_TRUE(p) << delta << " " << alpha;
      EXPECT_NEAR(p->a, neck_radius_oracle(delta, alpha), 1e-12 * p->a + 1e-15);
    }
  }
}

TEST(Catenoid, NeckRatioApproachesLimit) {
  const double limit = 0.5 / std::log(2.0);
  double prev_err = 1.0;
  for (double delta : {1e-2, 3e-3, 1e-3}) {
    const auto p = solve_catenoid(delta, 0.5);
    ASSERT_TRUE(p);
    const double err = std::abs(p->a / delta - limit);
    EXPECT_LT(err, prev_err);
    prev_err = err;
  }
  EXPECT_LT(prev_err, 0.01 * limit);
}

TEST(Catenoid, NoSolutionForWideJunction) {
  // Nearly equal rings this far apart admit no catenoid with its neck past
  // the junction.
  EXPECT_FALSE(solve_catenoid(0.7, 0.99));
}

TEST(Catenoid, RejectsBadInput) {
  EXPECT_THROW(solve_catenoid(0.0, 0.5), std::invalid_argument);
  EXPECT_THROW(solve_catenoid(0.01, 1.0), std::invalid_argument);
}

TEST(Catenoid, ClosedFormMatchesQuadrature) {
  for (double delta : {0.05, 0.01}) {
    const auto p = solve_catenoid(delta, 0.5);
    ASSERT_TRUE(p);
    const double closed = catenoid_area_closed_form(*p, two_pi);
    const double quad = graph_area(catenoid_profile(*p), LengthProfile::round_sphere(two_pi));
    EXPECT_NEAR(quad, closed, 1e-8 * closed);
  }
}

TEST(Catenoid, ProfileHitsBoundaryValues) {
  const auto p = solve_catenoid(0.01, 0.5);
  ASSERT_TRUE(p);
  const auto f = catenoid_profile(*p);
  EXPECT_NEAR(f.value(0.0), 1.0, 1e-14);
  EXPECT_NEAR(f.value(0.01), 0.5, 1e-10);
}

TEST(Catenoid, DegenerateNeckLimit) {
  CatenoidParams p;
  p.delta = 0.1;
  p.alpha = 0.5;
  p.a = 1e-300;
  EXPECT_NEAR(catenoid_area_closed_form(p, two_pi),
              0.5 * two_pi * (1.0 - 0.25 * std::cos(0.1) * std::cos(0.1)), 1e-15);
  p.a = 0.9;
  EXPECT_THROW(catenoid_area_closed_form(p, two_pi), std::domain_error);
}

TEST(Disk, RoundSphereExact) {
  const auto L = LengthProfile::round_sphere(two_pi);
  const auto d = disk_profile(0.1, 0.5, L);
  const double exact = pi * 0.25 * std::cos(0.1) * std::cos(0.1);
  EXPECT_NEAR(d.area, exact, 1e-10);
  EXPECT_NEAR(graph_area(d.profile, L), exact, 1e-10);
  EXPECT_NEAR(d.f_end, 0.5 * std::sin(0.1), 1e-10);
  EXPECT_GE(disk_area_bound(0.1, 0.5, L), d.area - 1e-12);
}

TEST(Disk, TabulatedSphereBoundDominates) {
  std::vector<double> t;
  std::vector<double> L;
  for (int i = 0; i <= 200; ++i) {
    t.push_back(0.5 * pi * i / 200.0);
    L.push_back(two_pi * std::cos(t.back()));
  }
  const auto tab = LengthProfile::tabulated(t, L);
  const auto d = disk_profile(0.1, 0.5, tab);
  EXPECT_NEAR(d.area, pi * 0.25 * std::cos(0.1) * std::cos(0.1), 1e-6);
  EXPECT_GE(disk_area_bound(0.1, 0.5, tab), d.area - 1e-8);
}

TEST(Sec5, BoundExamples) {
  const ConeSpace s(2, 0.9);
  const double b = sec5_bound(s, 0.001, 0.5);
  EXPECT_LT(b, 0.5);
  EXPECT_NEAR(0.5 - b, 1.8e-7, 0.05e-7);
  EXPECT_NEAR(sec5_bound(s, 0.05, 0.5), 0.50022, 1e-5);
  EXPECT_NEAR(static_cast<double>(sec5_margin(s, std::log(0.001L), 0.5L)), 0.5 - b, 1e-15);
}

TEST(Sec5, BoundContinuousInAlpha) {
  const ConeSpace s(3, 0.9);
  for (double alpha = 0.05; alpha < 0.95; alpha += 0.05) {
    const double h = 1e-7;
    EXPECT_NEAR(sec5_bound(s, 0.01, alpha + h), sec5_bound(s, 0.01, alpha), 1e-5);
  }
}

TEST(Sec5, NumericBelowBound) {
  const ConeSpace s(2, 0.9);
  const double v = sec5_area_numeric(s, 0.001, 0.5);
  EXPECT_LE(v, 0.4999998 + 1e-9);
  EXPECT_LE(v, sec5_bound(s, 0.001, 0.5) + 1e-9);
  for (double alpha : {0.1, 0.5, 0.9}) {
    for (double delta : {0.2, 0.01, 1e-4}) {
      for (int n : {2, 3, 4}) {
        const ConeSpace t(n, 0.85);
        EXPECT_LE(sec5_area_numeric(t, delta, alpha), sec5_bound(t, delta, alpha) + 1e-9);
      }
    }
  }
}

TEST(Sec5, ProfileJunctionContinuous) {
  const auto c = make_sec5_competitor(ConeSpace(3, 0.9), 0.01, 0.3);
  const auto f = sec5_profile(c);
  ASSERT_EQ(f.breakpoints().front(), 0.01);
  EXPECT_NEAR(std::exp(-c.mu * 0.01), 0.3, 1e-12);
  EXPECT_NEAR(f.value(0.01), 0.3, 1e-12);
}

TEST(Sec5, BelowThresholdSomePointWins) {
  // The gain alpha^n sin(delta)^p is far below double resolution here, so the
  // winning point is certified through the extended-precision margin.
  const ConeSpace s(3, 0.9);
  bool any = false;
  for (double alpha : {0.1, 0.3, 0.5, 0.7}) {
    for (long double log_delta : {-5.0L, -10.0L, -20.0L, -40.0L}) {
      any = any || sec5_margin(s, log_delta, alpha) > 0.0L;
    }
  }
  EXPECT_TRUE(any);
}

TEST(Sec5, AboveThresholdNothingWins) {
  const ConeSpace s(3, 0.95);
  for (double alpha : {0.05, 0.2, 0.5, 0.8, 0.95}) {
    for (double delta : {0.4, 0.1, 0.01, 1e-3, 1e-5}) {
      EXPECT_GE(sec5_area_numeric(s, delta, alpha), 1.0 / 3.0 - 1e-9);
      EXPECT_LT(sec5_margin(s, std::log(static_cast<long double>(delta)), alpha), 0.0L);
    }
  }
}

TEST(CompetitorSearch, Examples) {
  const auto a = competitor_search(ConeSpace(2, 0.9));
  ASSERT_TRUE(a.found);
  EXPECT_LT(a.value(2), 0.5L);
  EXPECT_LE(a.evaluations, 1000u);

  EXPECT_FALSE(competitor_search(ConeSpace(5, 0.81)).found);

  const auto c = competitor_search(ConeSpace(5, 0.79));
  ASSERT_TRUE(c.found);
  // value = 1/5 - margin with a margin far below long double resolution of 1/5.
  EXPECT_GT(c.margin, 0.0L);
  EXPECT_LE(c.value(5), 0.2L);
}

TEST(CompetitorSearch, RespectsBudget) {
  CompetitorSearchConfig cfg;
  cfg.budget = 10;
  EXPECT_EQ(competitor_search(ConeSpace(2, 0.9), cfg).evaluations, 10u);
}

TEST(CompetitorSearch, MonotoneInLambda) {
  for (int n : {3, 4, 5, 6}) {
    bool seen_none = false;
    for (int i = 0; i < 50; ++i) {
      const double lambda = 0.7 + 0.29 * i / 49.0;
      const bool found = competitor_search(ConeSpace(n, lambda)).found;
      if (!found) {
        seen_none = true;
      }
      EXPECT_FALSE(seen_none && found) << "n=" << n << " lambda=" << lambda;
    }
  }
}
