#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "trigzeros/errors.hpp"
#include "trigzeros/quadrature.hpp"

using namespace trigzeros;

TEST(GaussLegendre, ExactForPolynomialsUpToDegree2pMinus1) {
  for (int p : {1, 2, 5, 16, 32}) {
    const GaussLegendreRule rule(p);
    double wsum = 0.0;
    for (double w : rule.weights()) wsum += w;
    EXPECT_NEAR(wsum, 2.0, 1e-14);
    const int deg = 2 * p - 1;
    // integral_0^1 x^deg = 1 / (deg + 1)
    const double v = rule.apply([&](double x) { return std::pow(x, deg); }, 0.0, 1.0);
    EXPECT_NEAR(v, 1.0 / (deg + 1), 1e-14) << "p=" << p;
  }
}

TEST(GaussLegendre, NodesAreSortedAndSymmetric) {
  const GaussLegendreRule rule(9);
  for (int i = 0; i < 9; ++i) {
    EXPECT_NEAR(rule.nodes()[i], -rule.nodes()[8 - i], 1e-15);
    if (i > 0) EXPECT_LT(rule.nodes()[i - 1], rule.nodes()[i]);
  }
  EXPECT_EQ(rule.nodes()[4], 0.0);
}

TEST(GradedBreakpoints, GrowGeometricallyTowardTheMiddle) {
  const auto b = graded_breakpoints(0.0, 1.0, 8, 2.0);
  ASSERT_EQ(b.size(), 9u);
  EXPECT_EQ(b.front(), 0.0);
  EXPECT_EQ(b.back(), 1.0);
  EXPECT_NEAR((b[2] - b[1]) / (b[1] - b[0]), 2.0, 1e-12);
  EXPECT_NEAR((b[8] - b[7]) * 2.0, b[7] - b[6], 1e-12);
  const auto u = graded_breakpoints(0.0, 1.0, 4, 1.0);
  EXPECT_NEAR(u[1], 0.25, 1e-15);
}

TEST(Integrate, SmoothFunction) {
  const auto r = integrate([](double x) { return std::exp(x); }, 0.0, 1.0, {});
  EXPECT_NEAR(r.value, std::exp(1.0) - 1.0, 1e-13);
  EXPECT_LE(r.error_estimate, 1e-9);
}

TEST(Integrate, OscillatoryFunction) {
  QuadratureConfig q;
  q.rel_tol = 1e-12;
  const auto r = integrate([](double x) { return std::cos(200.0 * x); }, 0.0, 1.0, q);
  EXPECT_NEAR(r.value, std::sin(200.0) / 200.0, 1e-12);
}

TEST(Integrate, EndpointSingularityAtLowerEnd) {
  for (double beta : {0.2, 0.5, 0.8, 0.95}) {
    // integral_0^1 x^{-beta} (1 + x) = 1/(1-beta) + 1/(2-beta)
    const auto r = integrate([&](double x) { return std::pow(x, -beta) * (1.0 + x); }, 0.0, 1.0, {},
                             {beta});
    EXPECT_NEAR(r.value, 1.0 / (1.0 - beta) + 1.0 / (2.0 - beta), 1e-9) << beta;
  }
}

TEST(Integrate, ReflectedUpperEndSingularity) {
  // integral_1^2 (2 - x)^{-1/2} dx, reflected to integral_0^1 u^{-1/2} du
  const auto r = integrate([](double u) { return std::pow(u, -0.5); }, 0.0, 1.0, {}, {0.5});
  EXPECT_NEAR(r.value, 2.0, 1e-12);
}

TEST(Integrate, NonConvergenceCarriesBestEstimate) {
  QuadratureConfig q;
  q.panels = 1;
  q.points_per_panel = 2;
  q.max_refinements = 2;
  q.rel_tol = 1e-12;
  try {
    integrate([](double x) { return std::sin(50.0 * x); }, 0.0, 3.0, q);
    FAIL() << "expected NumericalError";
  } catch (const NumericalError& e) {
    EXPECT_TRUE(std::isfinite(e.best_estimate()));
    EXPECT_GT(e.error_bound(), 0.0);
  }
}

TEST(Integrate, NonFiniteIntegrandIsAnError) {
  EXPECT_THROW(integrate([](double x) { return 1.0 / (x - 0.5); }, 0.0, 1.0, {}), NumericalError);
}

TEST(Integrate, ResultIndependentOfThreadCount) {
  auto f = [](double x) { return std::sin(30.0 * x) * std::exp(-x); };
  const auto one = integrate(f, 0.0, 5.0, {}, {}, 1);
  const auto four = integrate(f, 0.0, 5.0, {}, {}, 4);
  EXPECT_EQ(one.value, four.value);
  EXPECT_EQ(one.error_estimate, four.error_estimate);
  EXPECT_EQ(one.evaluations, four.evaluations);
}

TEST(QuadratureConfig, Validation) {
  QuadratureConfig q;
  q.rel_tol = 0.0;
  EXPECT_THROW(q.validate(), DomainError);
  q = {};
  q.grading = 0.5;
  EXPECT_THROW(q.validate(), DomainError);
  q = {};
  q.panels = 0;
  EXPECT_THROW(q.validate(), DomainError);
  EXPECT_THROW(integrate([](double) { return 1.0; }, 0.0, 1.0, {}, {1.0}), DomainError);
}
