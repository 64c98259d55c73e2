#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "trigzeros/quadrature.hpp"

namespace trigzeros {

enum class CorrelationKind { Iid, Geometric, FractionalGaussianNoise, Tabulated };

/// Serializable form of a model: {"kind": ..., "params": {name: number}}.
///
/// Kinds and parameters:
///   iid        (none)
///   geometric  r in (0, 1)
///   fgn        H in (1/2, 1)
///   tabulated  rho_0 = 1, rho_1, ..., rho_K  (rho(k) = 0 beyond K)
struct ModelConfig {
  std::string kind;
  std::map<std::string, double> params;

  std::string to_json() const;
  static ModelConfig from_json(const std::string& text);

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

/// Stationary correlation function rho(k) of the coefficient sequences,
/// together with its spectral density
///
///   psi(x) = sum_{k in Z} rho(|k|) e^{ikx} = 1 + 2 sum_{k>=1} rho(k) cos(kx).
///
/// Immutable after construction.
class CorrelationModel {
 public:
  static CorrelationModel iid();
  static CorrelationModel geometric(double ratio);
  static CorrelationModel fractional_gaussian_noise(double hurst);
  /// `values[k]` is rho(k); values[0] must be 1.
  static CorrelationModel tabulated(std::vector<double> values);
  static CorrelationModel from_config(const ModelConfig& config);

  ModelConfig to_config() const;

  CorrelationKind kind() const noexcept { return kind_; }
  /// r for Geometric, H for fGn, unused otherwise.
  double parameter() const noexcept { return parameter_; }
  const std::vector<double>& table() const noexcept { return table_; }

  bool has_closed_form_psi() const noexcept { return kind_ != CorrelationKind::Tabulated; }
  bool psi_singular_at_endpoints() const noexcept {
    return kind_ == CorrelationKind::FractionalGaussianNoise;
  }
  /// Exponent b of the end point blow-up psi(x) ~ c x^{-b}; 2H - 1 for fGn, 0 otherwise.
  double psi_singularity_exponent() const noexcept;

  /// Short human-readable label, e.g. "fgn(H=0.75)".
  std::string name() const;

  double rho(std::size_t k) const;
  /// Spectral density on the open period (0, 2 pi).
  double psi(double x) const;

 private:
  CorrelationModel(CorrelationKind kind, double parameter, std::vector<double> table);

  CorrelationKind kind_;
  double parameter_;
  std::vector<double> table_;
};

/// c_H = sin(pi H) Gamma(2H + 1).
double fgn_constant(double hurst);

/// rho(k); rejects models whose parameters are out of domain.
double rho_eval(const CorrelationModel& model, long long k);

/// psi(x) for 0 < x < 2 pi; DomainError otherwise.
double psi_eval(const CorrelationModel& model, double x);

struct HypothesisReport {
  double l1_norm = 0.0;        ///< (1/2pi) integral of psi over one period
  double l1_error = 0.0;       ///< quadrature error estimate of l1_norm
  double infimum_gamma = 0.0;  ///< numerical infimum of psi
  double argmin = 0.0;
  int grid_points = 0;
  bool passes = false;
};

/// Checks psi in L1 and inf psi > 0 numerically.
///
/// The infimum is taken over `grid_points` uniform points on
/// [1e-3, 2 pi - 1e-3] and then refined by golden-section search around the
/// grid minimiser.
HypothesisReport validate_hypotheses(const CorrelationModel& model, int grid_points = 4096,
                                     const QuadratureConfig& quad = {});

}  // namespace trigzeros
