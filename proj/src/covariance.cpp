#include "trigzeros/covariance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>

#include "trigzeros/errors.hpp"
#include "trigzeros/kernels.hpp"
#include "trigzeros/summation.hpp"

namespace trigzeros {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kCauchySchwarzSlack = 1e-10;
}  // namespace

CovarianceEvaluator::CovarianceEvaluator(const CorrelationModel& model, int n) : n_(n) {
  if (n < 1) throw DomainError("covariance: degree n must be >= 1, got " + std::to_string(n));
  const double nn = n;
  zero_lag_fprime_ = (nn + 1.0) * (2.0 * nn + 1.0) / 6.0;
  var_weight_.resize(n - 1);
  fprime_weight_.resize(n - 1);
  cross_weight_.resize(n - 1);
  for (int r = 1; r < n; ++r) {
    const double rho = model.rho(static_cast<std::size_t>(r));
    const double fejer = 1.0 - r / nn;
    // sum_{k=1}^{m} k (r + k), exact in 64-bit integers for n <= 2e5.
    const std::int64_t m = n - r;
    const std::int64_t inner = r * m * (m + 1) / 2 + m * (m + 1) * (2 * m + 1) / 6;
    var_weight_[r - 1] = 2.0 * fejer * rho;
    fprime_weight_[r - 1] = 2.0 * static_cast<double>(inner) / nn * rho;
    cross_weight_[r - 1] = -fejer * r * rho;
  }
}

double CovarianceEvaluator::variance(double t) const {
  CompensatedSum sum;
  for (int r = n_ - 1; r >= 1; --r) sum.add(var_weight_[r - 1] * std::cos(r * t));
  sum.add(1.0);
  return sum.value();
}

double CovarianceEvaluator::derivative_variance(double t) const {
  CompensatedSum sum;
  for (int r = n_ - 1; r >= 1; --r) sum.add(fprime_weight_[r - 1] * std::cos(r * t));
  sum.add(zero_lag_fprime_);
  return sum.value();
}

double CovarianceEvaluator::cross_covariance(double t) const {
  CompensatedSum sum;
  for (int r = n_ - 1; r >= 1; --r) sum.add(cross_weight_[r - 1] * std::sin(r * t));
  return sum.value();
}

CovarianceTriple CovarianceEvaluator::triple(double t) const {
  CompensatedSum var;
  CompensatedSum fprime;
  CompensatedSum cross;
  for (int r = n_ - 1; r >= 1; --r) {
    const double c = std::cos(r * t);
    const double s = std::sin(r * t);
    var.add(var_weight_[r - 1] * c);
    fprime.add(fprime_weight_[r - 1] * c);
    cross.add(cross_weight_[r - 1] * s);
  }
  var.add(1.0);
  fprime.add(zero_lag_fprime_);
  CovarianceTriple out{var.value(), fprime.value(), cross.value(), t, n_};
  const double bound = out.var_f * out.var_fprime;
  if (out.cov_cross * out.cov_cross > bound + kCauchySchwarzSlack * std::abs(bound))
    throw ConsistencyError("covariance: Cauchy-Schwarz violated at t=" + std::to_string(t) +
                           ", n=" + std::to_string(n_));
  return out;
}

double variance(const CorrelationModel& model, int n, double t) {
  return CovarianceEvaluator(model, n).variance(t);
}

double derivative_variance(const CorrelationModel& model, int n, double t) {
  return CovarianceEvaluator(model, n).derivative_variance(t);
}

double cross_covariance(const CorrelationModel& model, int n, double t) {
  return CovarianceEvaluator(model, n).cross_covariance(t);
}

CovarianceTriple covariance_triple(const CorrelationModel& model, int n, double t) {
  return CovarianceEvaluator(model, n).triple(t);
}

KernelConvolutions kernel_convolutions(const CorrelationModel& model, int n, double t,
                                       const QuadratureConfig& quad) {
  const KernelFamily kernels(n);
  const double beta = model.psi_singularity_exponent();
  // psi(2 pi - y) = psi(y), so (g * psi)(t) = (1/2 pi) int_0^pi (g(t-y) + g(t+y)) psi(y) dy,
  // which leaves the fGn singularity at the lower end only.
  auto convolve = [&](auto&& kernel, const QuadratureConfig& config) {
    return integrate([&](double y) { return (kernel(t - y) + kernel(t + y)) * model.psi(y); }, 0.0,
                     std::numbers::pi, config, {beta})
               .value /
           kTwoPi;
  };
  KernelConvolutions out;
  out.k_psi = convolve([&](double x) { return kernels.fejer(x); }, quad);
  out.scaled_l_psi = convolve([&](double x) { return kernels.l_kernel(x); }, quad) / kernels.alpha();
  // The folded K_n' integrand cancels to nothing at symmetric points, so its
  // tolerance is anchored to the Bernstein scale ||K_n'||_1 <= n instead.
  QuadratureConfig derivative_quad = quad;
  derivative_quad.abs_tol = std::max(quad.abs_tol, quad.rel_tol * kTwoPi * n);
  out.half_kprime_psi =
      0.5 * convolve([&](double x) { return kernels.fejer_derivative_periodic(x); }, derivative_quad);
  return out;
}

double ConvolutionResidual::max() const noexcept {
  return std::max({variance, derivative_variance, cross});
}

ConvolutionResidual convolution_residual(const CorrelationModel& model, int n, double t,
                                         const QuadratureConfig& quad) {
  const auto direct = CovarianceEvaluator(model, n).triple(t);
  const auto conv = kernel_convolutions(model, n, t, quad);
  return {std::abs(direct.var_f - conv.k_psi), std::abs(direct.var_fprime - conv.scaled_l_psi),
          std::abs(direct.cov_cross - conv.half_kprime_psi)};
}

}  // namespace trigzeros
