#pragma once

#include <vector>

#include "trigzeros/correlation.hpp"
#include "trigzeros/quadrature.hpp"

namespace trigzeros {

/// Second moments of (F_n(t), F_n'(t)) where F_n = f_n / sqrt(n).
struct CovarianceTriple {
  double var_f = 0.0;       ///< E[F_n(t)^2]
  double var_fprime = 0.0;  ///< E[F_n'(t)^2]
  double cov_cross = 0.0;   ///< E[F_n(t) F_n'(t)]
  double t = 0.0;
  int n = 0;
};

/// Direct finite-sum evaluator of the moments for one model and degree.
///
/// With rho(r) the correlation and m = n - r,
///   E[F^2]   = 1 + 2 sum_{r=1}^{n-1} (1 - r/n) rho(r) cos(rt)
///   E[F'^2]  = (n+1)(2n+1)/6 + (2/n) sum_{r=1}^{n-1} (r m(m+1)/2 + m(m+1)(2m+1)/6) rho(r) cos(rt)
///   E[F F']  = -sum_{r=1}^{n-1} (1 - r/n) r rho(r) sin(rt)
/// The lag weights are tabulated once; each evaluation is O(n), accumulated
/// from r = n-1 down to 1 with compensated summation.
class CovarianceEvaluator {
 public:
  CovarianceEvaluator(const CorrelationModel& model, int n);

  int degree() const noexcept { return n_; }

  double variance(double t) const;
  double derivative_variance(double t) const;
  double cross_covariance(double t) const;

  /// All three moments in one pass; throws ConsistencyError if the
  /// Cauchy-Schwarz inequality fails by more than 1e-10 relative.
  CovarianceTriple triple(double t) const;

 private:
  int n_;
  double zero_lag_fprime_;
  std::vector<double> var_weight_;    // index r - 1
  std::vector<double> fprime_weight_;
  std::vector<double> cross_weight_;
};

double variance(const CorrelationModel& model, int n, double t);
double derivative_variance(const CorrelationModel& model, int n, double t);
double cross_covariance(const CorrelationModel& model, int n, double t);
CovarianceTriple covariance_triple(const CorrelationModel& model, int n, double t);

/// The three moments recomputed as kernel convolutions with the spectral
/// density, (g * psi)(t) = (1/2 pi) integral_0^{2 pi} g(t - y) psi(y) dy.
struct KernelConvolutions {
  double k_psi = 0.0;          ///< K_n * psi
  double scaled_l_psi = 0.0;   ///< (n+1)(2n+1)/6 * (L_n * psi)
  double half_kprime_psi = 0.0;  ///< (1/2) K_n' * psi
};

KernelConvolutions kernel_convolutions(const CorrelationModel& model, int n, double t,
                                       const QuadratureConfig& quad = {});

struct ConvolutionResidual {
  double variance = 0.0;
  double derivative_variance = 0.0;
  double cross = 0.0;

  double max() const noexcept;
};

/// |direct moment - convolution| for each of the three moments. The identities
/// are exact, so the residuals measure quadrature error only.
ConvolutionResidual convolution_residual(const CorrelationModel& model, int n, double t,
                                         const QuadratureConfig& quad = {});

}  // namespace trigzeros
