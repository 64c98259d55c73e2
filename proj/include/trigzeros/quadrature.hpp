#pragma once

#include <functional>
#include <vector>

namespace trigzeros {

/// Panel layout and stopping rule for composite Gauss-Legendre quadrature.
struct QuadratureConfig {
  int panels = 16;            ///< initial panel count
  int points_per_panel = 16;  ///< Gauss-Legendre order on every panel
  double grading = 2.0;       ///< width ratio between neighbouring initial panels, toward the ends
  int max_refinements = 48;   ///< maximum bisection depth of any panel
  double rel_tol = 1e-10;
  double abs_tol = 1e-15;  ///< absolute floor, shared over the whole interval

  /// Throws DomainError if a field is outside its domain.
  void validate() const;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;  ///< sum of |fine - coarse| over accepted panels
  long evaluations = 0;
  int panels = 0;  ///< final (accepted) panel count
};

/// Integrable power-law blow-up |f(x)| ~ C (x - lo)^{-exponent} at the lower
/// end point. The exponent must lie in [0, 1). Blow-ups at the upper end are
/// handled by reflecting the integrand first: x -> hi - x cannot be formed
/// accurately inside the integrator once hi - x drops below ulp(hi).
struct EndpointSingularity {
  double at_lo = 0.0;
};

/// Gauss-Legendre rule of a given order on [-1, 1].
class GaussLegendreRule {
 public:
  explicit GaussLegendreRule(int order);

  int order() const noexcept { return static_cast<int>(nodes_.size()); }
  const std::vector<double>& nodes() const noexcept { return nodes_; }
  const std::vector<double>& weights() const noexcept { return weights_; }

  /// Rule applied on [a, b].
  double apply(const std::function<double(double)>& f, double a, double b) const;

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

/// Initial panel break points on [lo, hi]: `panels` panels whose widths grow
/// geometrically by `grading` from each end toward the middle.
std::vector<double> graded_breakpoints(double lo, double hi, int panels, double grading);

/// Adaptive composite Gauss-Legendre quadrature of f over [lo, hi].
///
/// Each panel is compared against its two halves; a panel is accepted once the
/// difference is below its share (by width) of max(rel_tol * integral of |f|,
/// abs_tol). Unaccepted panels are bisected, all active panels of a round are
/// evaluated concurrently on `threads` workers, and sums are reduced in panel
/// order, so the result does not depend on scheduling.
///
/// A lower end point singularity is removed by the substitution
/// x = lo + (hi - lo) s^q with q = 1 / (1 - exponent).
///
/// Throws NumericalError carrying the best estimate when a panel would need
/// more than max_refinements bisections.
QuadratureResult integrate(const std::function<double(double)>& f, double lo, double hi,
                           const QuadratureConfig& config, EndpointSingularity singular = {},
                           unsigned threads = 1);

}  // namespace trigzeros
