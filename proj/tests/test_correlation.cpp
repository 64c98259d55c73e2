// Correlation models and spectral densities
#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "trigzeros/correlation.hpp"
#include "trigzeros/errors.hpp"

using namespace trigzeros;

namespace {

constexpr double kPi = std::numbers::pi;

// Direct fGn correlation in extended precision; independent of the series path.
long double fgn_rho_direct(long double h, long long k) {
  const long double p = 2.0L * h;
  const long double kk = static_cast<long double>(k);
  return 0.5L * (std::pow(std::fabs(kk + 1.0L), p) + std::pow(std::fabs(kk - 1.0L), p) -
                 2.0L * std::pow(std::fabs(kk), p));
}

std::vector<CorrelationModel> all_models() {
  return {CorrelationModel::iid(), CorrelationModel::geometric(0.5), CorrelationModel::geometric(0.9),
          CorrelationModel::fractional_gaussian_noise(0.6),
          CorrelationModel::fractional_gaussian_noise(0.75),
          CorrelationModel::fractional_gaussian_noise(0.9),
          CorrelationModel::tabulated({1.0, 0.5, 0.2, -0.1})};
}

}  // namespace

// =============================================================================
// rho
// =============================================================================

TEST(Rho, Examples) {
  EXPECT_EQ(rho_eval(CorrelationModel::iid(), 0), 1.0);
  EXPECT_EQ(rho_eval(CorrelationModel::iid(), 3), 0.0);
  EXPECT_NEAR(rho_eval(CorrelationModel::fractional_gaussian_noise(0.75), 1), std::sqrt(2.0) - 1.0,
              1e-15);
  EXPECT_DOUBLE_EQ(rho_eval(CorrelationModel::geometric(0.5), 2), 0.25);
}

TEST(Rho, ZeroLagIsOneForEveryModel) {
  for (const auto& m : all_models()) EXPECT_EQ(m.rho(0), 1.0) << m.name();
}

TEST(Rho, FgnSeriesAgreesWithDirectFormula) {
  for (double h : {0.55, 0.6, 0.75, 0.9, 0.99}) {
    const auto m = CorrelationModel::fractional_gaussian_noise(h);
    for (long long k : {1LL, 2LL, 7LL, 8LL, 9LL, 20LL, 100LL, 1000LL}) {
      const double expected = static_cast<double>(fgn_rho_direct(h, k));
      EXPECT_NEAR(m.rho(k), expected, 1e-12 * std::abs(expected) + 1e-17) << "H=" << h << " k=" << k;
    }
  }
}

TEST(Rho, BoundedByOne) {
  for (const auto& m : all_models())
    for (std::size_t k = 0; k < 2000; ++k) EXPECT_LE(std::abs(m.rho(k)), 1.0) << m.name();
}

TEST(Rho, DecaysMonotonicallyForFgnAndGeometric) {
  for (const auto& m : {CorrelationModel::geometric(0.5), CorrelationModel::geometric(0.99),
                        CorrelationModel::fractional_gaussian_noise(0.6),
                        CorrelationModel::fractional_gaussian_noise(0.9)}) {
    double prev = std::abs(m.rho(1));
    for (std::size_t k = 2; k <= 100000; ++k) {
      const double cur = std::abs(m.rho(k));
      ASSERT_LE(cur, prev) << m.name() << " k=" << k;
      prev = cur;
    }
  }
}

TEST(Rho, RejectsOutOfDomainParameters) {
  EXPECT_THROW(CorrelationModel::geometric(0.0), DomainError);
  EXPECT_THROW(CorrelationModel::geometric(1.0), DomainError);
  EXPECT_THROW(CorrelationModel::fractional_gaussian_noise(0.5), DomainError);
  EXPECT_THROW(CorrelationModel::fractional_gaussian_noise(1.0), DomainError);
  EXPECT_THROW(CorrelationModel::tabulated({0.9, 0.1}), DomainError);
  EXPECT_THROW(CorrelationModel::tabulated({1.0, 1.5}), DomainError);
  EXPECT_THROW(rho_eval(CorrelationModel::iid(), -1), DomainError);
}

// =============================================================================
// psi
// =============================================================================

TEST(Psi, IidIsIdenticallyOne) {
  const auto m = CorrelationModel::iid();
  for (double x : {1e-6, 0.5, kPi, 6.0}) EXPECT_EQ(psi_eval(m, x), 1.0);
}

TEST(Psi, GeometricAtPiMatchesPartialSums) {
  for (double r : {0.3, 0.5, 0.9}) {
    // 1 + 2 sum_{k<=K} r^k cos(k pi)
    long double sum = 1.0L;
    for (int k = 1; k <= 2000; ++k) sum += 2.0L * std::pow((long double)r, k) * ((k % 2) ? -1 : 1);
    const auto m = CorrelationModel::geometric(r);
    EXPECT_NEAR(psi_eval(m, kPi), static_cast<double>(sum), 1e-13);
    EXPECT_NEAR(psi_eval(m, kPi), (1.0 - r) / (1.0 + r), 1e-14);
  }
}

TEST(Psi, FgnAtPiMatchesBruteForceFourierSum) {
  // psi(pi) = 1 + 2 sum_k (-1)^k rho_H(k); the alternating tail is removed by
  // averaging two consecutive partial sums.
  const long double h = 0.75L;
  long double partial = 1.0L;
  long double previous = partial;
  const long long K = 1000000;
  for (long long k = 1; k <= K; ++k) {
    previous = partial;
    partial += 2.0L * fgn_rho_direct(h, k) * ((k % 2) ? -1.0L : 1.0L);
  }
  const double oracle = static_cast<double>(0.5L * (partial + previous));
  const double value = psi_eval(CorrelationModel::fractional_gaussian_noise(0.75), kPi);
  EXPECT_NEAR(value, oracle, 1e-4 * oracle);  // four significant digits
  EXPECT_NEAR(value, 0.47472348287936085, 1e-12);
}

TEST(Psi, FgnSmallArgumentAsymptotics) {
  for (double h : {0.6, 0.75, 0.9}) {
    const auto m = CorrelationModel::fractional_gaussian_noise(h);
    double prev_gap = 1.0;
    for (double x : {1e-1, 1e-2, 1e-4, 1e-6}) {
      const double ratio = m.psi(x) / (fgn_constant(h) * std::pow(x, 1.0 - 2.0 * h));
      const double gap = std::abs(ratio - 1.0);
      EXPECT_LE(gap, prev_gap + 1e-15);
      prev_gap = gap;
    }
    EXPECT_LT(prev_gap, 1e-6);
  }
}

TEST(Psi, SymmetricAboutPi) {
  for (const auto& m : all_models()) {
    for (int i = 1; i <= 400; ++i) {
      const double x = kPi * i / 401.0;
      const double a = m.psi(x);
      const double b = m.psi(2.0 * kPi - x);
      EXPECT_NEAR(a, b, 1e-12 * std::max(1.0, std::abs(a))) << m.name() << " x=" << x;
    }
  }
}

TEST(Psi, TabulatedIsTruncatedFourierSum) {
  std::vector<double> table{1.0};
  for (int k = 1; k <= 80; ++k) table.push_back(std::pow(0.5, k));
  const auto tab = CorrelationModel::tabulated(table);
  const auto geo = CorrelationModel::geometric(0.5);
  for (double x : {0.1, 1.0, 2.5, kPi, 5.0}) EXPECT_NEAR(tab.psi(x), geo.psi(x), 1e-15 * 10);
}

TEST(Psi, RejectsEndpoints) {
  const auto m = CorrelationModel::fractional_gaussian_noise(0.75);
  EXPECT_THROW(psi_eval(m, 0.0), DomainError);
  EXPECT_THROW(psi_eval(m, 2.0 * kPi), DomainError);
  EXPECT_THROW(psi_eval(CorrelationModel::iid(), -1.0), DomainError);
}

// =============================================================================
// Hypotheses
// =============================================================================

TEST(Hypotheses, IidPassesWithUnitNormAndInfimum) {
  const auto r = validate_hypotheses(CorrelationModel::iid());
  EXPECT_NEAR(r.l1_norm, 1.0, 1e-14);
  EXPECT_EQ(r.infimum_gamma, 1.0);
  EXPECT_TRUE(r.passes);
  EXPECT_EQ(r.grid_points, 4096);
}

TEST(Hypotheses, FgnPassesWithMinimumAtPi) {
  for (double h : {0.6, 0.75, 0.9}) {
    const auto r = validate_hypotheses(CorrelationModel::fractional_gaussian_noise(h));
    EXPECT_TRUE(r.passes);
    EXPECT_NEAR(r.argmin, kPi, 1e-4);
    EXPECT_NEAR(r.l1_norm, 1.0, 1e-4);
  }
}

TEST(Hypotheses, GeometricInfimumIsClosedForm) {
  const auto r = validate_hypotheses(CorrelationModel::geometric(0.9));
  EXPECT_NEAR(r.infimum_gamma, 0.1 / 1.9, 1e-12);
  EXPECT_NEAR(r.argmin, kPi, 1e-4);
  EXPECT_NEAR(r.l1_norm, 1.0, 1e-10);
  EXPECT_TRUE(r.passes);
}

TEST(Hypotheses, UnitMeanOfSpectralDensity) {
  for (const auto& m : all_models()) {
    const double tol = m.psi_singular_at_endpoints() ? 1e-4 : 1e-10;
    // Tabulated example has psi > 0 everywhere, so |psi| = psi.
    EXPECT_NEAR(validate_hypotheses(m).l1_norm, 1.0, tol) << m.name();
  }
}

TEST(Hypotheses, NegativeDensityFails) {
  // psi = 1 + 1.8 cos x dips to -0.8
  const auto r = validate_hypotheses(CorrelationModel::tabulated({1.0, 0.9}));
  EXPECT_FALSE(r.passes);
  EXPECT_NEAR(r.infimum_gamma, -0.8, 1e-10);
}

TEST(Hypotheses, RejectsCoarseGrid) {
  EXPECT_THROW(validate_hypotheses(CorrelationModel::iid(), 8), DomainError);
}

// =============================================================================
// Configuration records
// =============================================================================

TEST(ModelConfig, RoundTripsThroughJson) {
  for (const auto& m : all_models()) {
    const auto text = m.to_config().to_json();
    const auto back = CorrelationModel::from_config(ModelConfig::from_json(text));
    EXPECT_EQ(back.to_config(), m.to_config()) << text;
    for (std::size_t k = 0; k < 10; ++k) EXPECT_EQ(back.rho(k), m.rho(k));
  }
}

TEST(ModelConfig, JsonHasExactlyKindAndParams) {
  EXPECT_EQ(CorrelationModel::fractional_gaussian_noise(0.75).to_config().to_json(),
            R"({"kind":"fgn","params":{"H":0.75}})");
  EXPECT_THROW(ModelConfig::from_json(R"({"kind":"iid","params":{},"extra":1})"), DomainError);
  EXPECT_THROW(ModelConfig::from_json(R"({"kind":"iid"})"), DomainError);
  EXPECT_THROW(ModelConfig::from_json("not json"), DomainError);
}

TEST(ModelConfig, RejectsUnknownKindsAndParameters) {
  EXPECT_THROW(CorrelationModel::from_config({"constant", {{"rho", 0.5}}}), DomainError);
  EXPECT_THROW(CorrelationModel::from_config({"fgn", {}}), DomainError);
  EXPECT_THROW(CorrelationModel::from_config({"fgn", {{"H", 0.7}, {"r", 0.1}}}), DomainError);
  EXPECT_THROW(CorrelationModel::from_config({"tabulated", {{"rho_0", 1.0}, {"rho_2", 0.1}}}),
               DomainError);
}
