#include "trigzeros/kernels.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "trigzeros/errors.hpp"
#include "trigzeros/summation.hpp"

namespace trigzeros {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// |sin(x/2)| below which K_n switches to its Taylor expansion at 0.
constexpr double kFejerLimitBranch = 1e-8;
// |sin(x/2)| below which K_n' and L_n are summed term by term; the closed
// forms lose about eps / sin^2(x/2) relative accuracy there.
constexpr double kDerivativeSeriesBranch = 1e-3;
constexpr double kLSeriesBranch = 5e-2;

void check_degree(int n) {
  if (n < 1) throw DomainError("kernel degree n must be >= 1, got " + std::to_string(n));
}

}  // namespace

double kernel_alpha(int n) {
  check_degree(n);
  return 6.0 / ((n + 1.0) * (2.0 * n + 1.0));
}

KernelFamily::KernelFamily(int degree) : n_(degree), alpha_(kernel_alpha(degree)) {}

double KernelFamily::fejer(double x) const {
  const double y = std::remainder(x, kTwoPi);
  const double s = std::sin(0.5 * y);
  const double n = n_;
  if (std::abs(s) < kFejerLimitBranch) return n * (1.0 - (n * n - 1.0) * y * y / 12.0);
  const double ratio = std::sin(0.5 * n * y) / s;
  return ratio * ratio / n;
}

double KernelFamily::fejer_derivative(double x) const {
  if (!(x > 0.0 && x < kTwoPi))
    throw DomainError("fejer_derivative: x must lie in (0, 2 pi), got " + std::to_string(x));
  return fejer_derivative_periodic(x);
}

double KernelFamily::fejer_derivative_periodic(double x) const {
  if (n_ == 1) return 0.0;  // K_1 is constant; the closed form would leave rounding noise
  const double y = std::remainder(x, kTwoPi);
  const double n = n_;
  const double s = std::sin(0.5 * y);
  if (std::abs(s) < kDerivativeSeriesBranch) {
    // K_n'(y) = -2 sum_{r=1}^{n-1} (1 - r/n) r sin(ry)
    CompensatedSum sum;
    for (int r = n_ - 1; r >= 1; --r) sum.add((1.0 - r / n) * r * std::sin(r * y));
    return -2.0 * sum.value();
  }
  const double sn = std::sin(0.5 * n * y);
  const double cn = std::cos(0.5 * n * y);
  return sn * cn / (s * s) - std::cos(0.5 * y) * sn * sn / (n * s * s * s);
}

double KernelFamily::l_kernel(double x) const {
  const double y = std::remainder(x, kTwoPi);
  const double n = n_;
  const double s = std::sin(0.5 * y);
  double re = 0.0;  // sum k cos(ky)
  double im = 0.0;  // sum k sin(ky)
  if (std::abs(s) < kLSeriesBranch) {
    CompensatedSum c;
    CompensatedSum d;
    for (int k = n_; k >= 1; --k) {
      c.add(k * std::cos(k * y));
      d.add(k * std::sin(k * y));
    }
    re = c.value();
    im = d.value();
  } else {
    const double s2 = s * s;
    const double half_odd = 0.5 * (2.0 * n + 1.0) * y;
    re = (n + 1.0) * std::sin(half_odd) / (2.0 * s) - (1.0 - std::cos((n + 1.0) * y)) / (4.0 * s2);
    im = std::sin((n + 1.0) * y) / (4.0 * s2) - (n + 1.0) * std::cos(half_odd) / (2.0 * s);
  }
  return alpha_ / n * (re * re + im * im);
}

double fejer(int n, double x) { return KernelFamily(n).fejer(x); }
double fejer_derivative(int n, double x) { return KernelFamily(n).fejer_derivative(x); }
double l_kernel(int n, double x) { return KernelFamily(n).l_kernel(x); }

double kernel_tail_mass(Kernel kernel, int n, double eps, const QuadratureConfig& quad) {
  if (!(eps > 0.0 && eps < std::numbers::pi))
    throw DomainError("kernel_tail_mass: eps must lie in (0, pi)");
  const KernelFamily family(n);
  const auto result =
      kernel == Kernel::K
          ? integrate([&](double x) { return family.fejer(x); }, eps, kTwoPi - eps, quad)
          : integrate([&](double x) { return family.l_kernel(x); }, eps, kTwoPi - eps, quad);
  return result.value / kTwoPi;
}

double l_tail_bound(int n, double eps) {
  const double s = std::sin(0.5 * eps);
  return kernel_alpha(n) * ((n + 1.0) / s + 2.0 / (s * s)) / kTwoPi;
}

}  // namespace trigzeros
