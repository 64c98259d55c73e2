#include "trigzeros/kacrice.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "trigzeros/errors.hpp"

namespace trigzeros {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kDiscriminantSlack = 1e-12;
}  // namespace

Interval full_period() { return {0.0, kTwoPi}; }

QuadratureConfig default_kac_rice_quadrature() {
  QuadratureConfig config;
  config.panels = 32;
  config.points_per_panel = 16;
  config.grading = 2.0;
  config.max_refinements = 40;
  config.rel_tol = 1e-10;
  return config;
}

KacRiceIntegrand::KacRiceIntegrand(const CorrelationModel& model, int n) : moments_(model, n) {}

double KacRiceIntegrand::operator()(double t) const {
  const auto m = moments_.triple(t);
  if (!(m.var_f > 0.0))
    throw DegenerateError("Kac-Rice: non-positive variance E[F_n(t)^2] = " + std::to_string(m.var_f) +
                          " at t=" + std::to_string(t));
  const double scale = m.var_f * m.var_fprime;
  double disc = scale - m.cov_cross * m.cov_cross;
  if (disc < 0.0) {
    if (disc < -kDiscriminantSlack * scale)
      throw ConsistencyError("Kac-Rice: negative discriminant at t=" + std::to_string(t));
    disc = 0.0;
  }
  return disc / (m.var_f * m.var_f);
}

double KacRiceIntegrand::density(double t) const { return std::sqrt((*this)(t)) / std::numbers::pi; }

double integrand(const CorrelationModel& model, int n, double t) {
  return KacRiceIntegrand(model, n)(t);
}

ZeroCountEstimate expected_zeros(const CorrelationModel& model, int n, Interval interval,
                                 const QuadratureConfig& quad, unsigned threads) {
  if (!(interval.lo >= 0.0 && interval.lo < interval.hi && interval.hi <= kTwoPi))
    throw DomainError("expected_zeros: interval must satisfy 0 <= lo < hi <= 2 pi");
  const KacRiceIntegrand density(model, n);
  const auto result =
      integrate([&](double t) { return density.density(t); }, interval.lo, interval.hi, quad, {},
                threads);
  ZeroCountEstimate estimate{result.value, result.error_estimate, interval, n};
  // A trigonometric polynomial of degree n has at most 2n zeros per period.
  if (estimate.value > 2.0 * n + estimate.error_estimate + 1e-9 * n)
    throw ConsistencyError("expected_zeros: value " + std::to_string(estimate.value) +
                           " exceeds the 2n cap for n=" + std::to_string(n));
  return estimate;
}

std::vector<LimitRow> normalized_limit_table(const CorrelationModel& model,
                                             const std::vector<int>& degrees, Interval interval,
                                             const QuadratureConfig& quad, unsigned threads) {
  for (std::size_t i = 1; i < degrees.size(); ++i)
    if (degrees[i] <= degrees[i - 1])
      throw DomainError("normalized_limit_table: degrees must be strictly increasing");
  std::vector<LimitRow> rows;
  rows.reserve(degrees.size());
  for (int n : degrees) {
    const auto est = expected_zeros(model, n, interval, quad, threads);
    rows.push_back({n, est.value, est.error_estimate, est.value / n});
  }
  return rows;
}

double theorem_limit() { return 2.0 / std::sqrt(3.0); }

double edge_constant(const HypothesisReport& report) {
  if (!report.passes)
    throw DegenerateError("edge bound: spectral hypotheses fail (gamma = " +
                          std::to_string(report.infimum_gamma) + ")");
  return std::sqrt(2.0 * report.l1_norm / (std::numbers::pi * report.infimum_gamma));
}

double edge_bound(const HypothesisReport& report, int n, double eps) {
  if (!(eps > 0.0)) throw DomainError("edge bound: eps must be > 0");
  return n * edge_constant(report) * std::sqrt(eps);
}

double edge_bound(const CorrelationModel& model, int n, double eps) {
  return edge_bound(validate_hypotheses(model), n, eps);
}

}  // namespace trigzeros
