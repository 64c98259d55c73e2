#pragma once

#include <vector>

#include "trigzeros/correlation.hpp"
#include "trigzeros/covariance.hpp"
#include "trigzeros/quadrature.hpp"

namespace trigzeros {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const noexcept { return hi - lo; }
};

/// Interval (0, 2 pi).
Interval full_period();

/// Expected number of real zeros of f_n on an interval.
struct ZeroCountEstimate {
  double value = 0.0;
  double error_estimate = 0.0;
  Interval interval;
  int n = 0;
};

/// Default quadrature for Kac-Rice integrals: graded toward the interval ends.
QuadratureConfig default_kac_rice_quadrature();

/// Kac-Rice density I_n(t) = (E[F^2] E[F'^2] - E[F F']^2) / E[F^2]^2 for one
/// model and degree. Thread-safe; evaluation is O(n).
class KacRiceIntegrand {
 public:
  KacRiceIntegrand(const CorrelationModel& model, int n);

  int degree() const noexcept { return moments_.degree(); }

  /// I_n(t). Throws DegenerateError if E[F_n(t)^2] <= 0 and ConsistencyError
  /// if the discriminant is negative beyond rounding.
  double operator()(double t) const;

  /// sqrt(I_n(t)) / pi, the zero density.
  double density(double t) const;

 private:
  CovarianceEvaluator moments_;
};

double integrand(const CorrelationModel& model, int n, double t);

/// E[N_n(interval)] = (1/pi) integral of sqrt(I_n). Interval must satisfy
/// 0 <= lo < hi <= 2 pi.
ZeroCountEstimate expected_zeros(const CorrelationModel& model, int n, Interval interval,
                                 const QuadratureConfig& quad = default_kac_rice_quadrature(),
                                 unsigned threads = 1);

struct LimitRow {
  int n = 0;
  double value = 0.0;
  double error_estimate = 0.0;
  double value_over_n = 0.0;
};

/// expected_zeros / n for increasing degrees. Over the full period the ratio
/// tends to 2/sqrt(3).
std::vector<LimitRow> normalized_limit_table(const CorrelationModel& model,
                                             const std::vector<int>& degrees, Interval interval,
                                             const QuadratureConfig& quad = default_kac_rice_quadrature(),
                                             unsigned threads = 1);

/// 2 / sqrt(3).
double theorem_limit();

/// C = sqrt(2 ||psi||_1 / (pi gamma)).
double edge_constant(const HypothesisReport& report);

/// n C sqrt(eps), bounding the expected zero count on [0, eps] and on
/// [2 pi - eps, 2 pi]. Throws DegenerateError if the hypotheses fail.
double edge_bound(const HypothesisReport& report, int n, double eps);
double edge_bound(const CorrelationModel& model, int n, double eps);

}  // namespace trigzeros
