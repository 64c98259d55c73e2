#pragma once

#include "trigzeros/quadrature.hpp"

namespace trigzeros {

/// The trigonometric kernels of degree n that turn the moments of the
/// normalized polynomial into convolutions with the spectral density:
///
///   K_n(x)  = (1/n) (sin(nx/2) / sin(x/2))^2                 (Fejer)
///   K_n'(x) = derivative of K_n
///   L_n(x)  = (alpha_n / n) |sum_{k=1}^n k e^{ikx}|^2,  alpha_n = 6 / ((n+1)(2n+1))
///
/// Both K_n and L_n are non-negative with unit mean over a period.
class KernelFamily {
 public:
  explicit KernelFamily(int degree);

  int degree() const noexcept { return n_; }
  double alpha() const noexcept { return alpha_; }

  double fejer(double x) const;
  /// Domain: the open interval (0, 2 pi).
  double fejer_derivative(double x) const;
  /// K_n' extended periodically; 0 at multiples of 2 pi.
  double fejer_derivative_periodic(double x) const;
  double l_kernel(double x) const;

 private:
  int n_;
  double alpha_;
};

/// alpha_n = 6 / ((n+1)(2n+1)).
double kernel_alpha(int n);

double fejer(int n, double x);
double fejer_derivative(int n, double x);
double l_kernel(int n, double x);

enum class Kernel { K, L };

/// (1/2 pi) integral over [eps, 2 pi - eps] of the chosen kernel.
double kernel_tail_mass(Kernel kernel, int n, double eps, const QuadratureConfig& quad = {});

/// Upper bound alpha_n ((n+1)/sin(eps/2) + 2/sin^2(eps/2)) / (2 pi) on
/// kernel_tail_mass(Kernel::L, n, eps).
double l_tail_bound(int n, double eps);

}  // namespace trigzeros
