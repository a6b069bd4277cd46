#include <cmath>
#include <stdexcept>

#include <gtest/gtest.h>

#include "conemin/stability.hpp"

using namespace conemin;

TEST(StabilityGap, Examples) {
  EXPECT_EQ(stability_gap(1.0, TestFunctionEta::from_radii(0.1, 50.0)), -2.0);
  EXPECT_NEAR(stability_gap(1.0 / std::sqrt(2.0), TestFunctionEta{1.0, 3.0}), 1.0, 1e-14);
  EXPECT_NEAR(stability_gap(0.9, TestFunctionEta::from_radii(1.0, 1e4)),
              0.19 / 0.81 * std::log(1e4) - 2.0, 1e-14);
  EXPECT_NEAR(stability_gap(0.9, TestFunctionEta::from_radii(1.0, 1e4)), 0.16045, 1e-5);
}

TEST(StabilityGap, DependsOnlyOnRatio) {
  for (double lambda : {0.3, 0.7, 0.95}) {
    const double a = stability_gap(lambda, TestFunctionEta::from_radii(1.0, 8.0));
    const double b = stability_gap(lambda, TestFunctionEta::from_radii(0.25, 2.0));
    const double c = stability_gap(lambda, TestFunctionEta::from_radii(4.0, 32.0));
    EXPECT_EQ(a, b);
    EXPECT_EQ(a, c);
  }
}

TEST(StabilityGap, IncreasingInRatio) {
  for (double lambda : {0.2, 0.6, 0.99}) {
    double prev = -1e300;
    for (double ratio : {1.5, 3.0, 10.0, 1e3, 1e8}) {
      const double g = stability_gap(lambda, TestFunctionEta::from_radii(1.0, ratio));
      EXPECT_GT(g, prev);
      prev = g;
    }
  }
  for (double ratio : {1.5, 1e8}) {
    EXPECT_EQ(stability_gap(1.0, TestFunctionEta::from_radii(1.0, ratio)), -2.0);
  }
}

TEST(StabilityGap, CriticalRatioIsZero) {
  for (double lambda : {0.1, 0.5, 0.7, 0.9, 0.99, 0.999}) {
    const double crit = critical_log_ratio(lambda);
    EXPECT_NEAR(stability_gap(lambda, TestFunctionEta{1.0, crit}), 0.0, 1e-12);
  }
  EXPECT_TRUE(std::isinf(critical_log_ratio(1.0)));
}

TEST(StabilityGap, RejectsBadInput) {
  EXPECT_THROW(stability_gap(0.0, TestFunctionEta{}), std::invalid_argument);
  EXPECT_THROW(stability_gap(1.2, TestFunctionEta{}), std::invalid_argument);
  EXPECT_THROW(stability_gap(0.5, TestFunctionEta{1.0, 0.0}), std::invalid_argument);
  EXPECT_THROW(TestFunctionEta::from_radii(2.0, 1.0), std::invalid_argument);
}

TEST(TestFunction, Shape) {
  const auto eta = TestFunctionEta::from_radii(0.5, 4.0);
  EXPECT_NEAR(eta.R(), 4.0, 1e-14);
  EXPECT_DOUBLE_EQ(eta(0.25), 0.5);
  EXPECT_EQ(eta(2.0), 1.0);
  EXPECT_NEAR(eta(6.0), 0.5, 1e-14);
  EXPECT_EQ(eta(9.0), 0.0);
}

TEST(InstabilityCertificate, Examples) {
  const auto half = instability_certificate(0.5);
  ASSERT_TRUE(half);
  EXPECT_GT(half->eta.log_ratio, 2.0 / 3.0);
  EXPECT_GT(half->gap, 0.0);
  EXPECT_GT(stability_gap(0.5, TestFunctionEta::from_radii(1.0, 10.0)), 0.0);

  EXPECT_FALSE(instability_certificate(1.0));

  const auto near_one = instability_certificate(0.99);
  ASSERT_TRUE(near_one);
  EXPECT_GT(near_one->eta.log_ratio, 2.0 * 0.9801 / 0.0199);
  EXPECT_NEAR(critical_log_ratio(0.99), 98.5, 0.01);
  EXPECT_GT(near_one->gap, 0.0);
}

TEST(ScaleSecondFundamental, Examples) {
  EXPECT_EQ(scale_second_fundamental(0.0, 0.3), 0.0);
  EXPECT_EQ(scale_second_fundamental(2.0, 1.0), 2.0);
  EXPECT_EQ(scale_second_fundamental(2.0, 0.5), 8.0);
  EXPECT_THROW(scale_second_fundamental(-1.0, 0.5), std::invalid_argument);
}
