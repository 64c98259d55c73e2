#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "trigzeros/correlation.hpp"
#include "trigzeros/kacrice.hpp"

namespace trigzeros {

/// One sample of the coefficient sequences (a_k), (b_k), k = 1..n, stored
/// zero-based. The two sequences are independent with the same Toeplitz
/// covariance rho(|k - l|).
struct CoefficientDraw {
  std::vector<double> a;
  std::vector<double> b;
  std::uint64_t seed = 0;
  std::string model_id;

  int degree() const noexcept { return static_cast<int>(a.size()); }
};

struct RootCountConfig {
  int oversampling = 16;          ///< grid points per unit degree; M = max(512, oversampling n)
  double refine_tol = 1e-10;      ///< bisection bracket width
  double tangency_margin = 1e-10;  ///< |f| below this at a local minimum without sign change is flagged

  void validate() const;
  int grid_size(int n) const;
};

enum class SamplingMethod { Cholesky, CirculantEmbedding };

/// Per-draw seed for trial `index` of a run seeded with `seed`. Trials seeded
/// this way are reproducible and independent of execution order.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// Sampler of stationary Gaussian sequences with correlation rho.
///
/// Degrees up to 512 use the Cholesky factor of the n x n Toeplitz matrix;
/// larger ones use the minimal circulant embedding of size 2n. The
/// factorization is computed once, draws are then O(n^2) resp. O(n log n).
class CoefficientSampler {
 public:
  static constexpr int kCholeskyMaxDegree = 512;

  CoefficientSampler(const CorrelationModel& model, int n);
  CoefficientSampler(const CorrelationModel& model, int n, SamplingMethod method);

  int degree() const noexcept { return n_; }
  SamplingMethod method() const noexcept { return method_; }

  /// a from stream (seed, 0), b from stream (seed, 1).
  CoefficientDraw draw(std::uint64_t seed) const;

  /// One sequence of length n from `rng`.
  std::vector<double> sample(std::mt19937_64& rng) const;

 private:
  int n_;
  SamplingMethod method_;
  std::string model_id_;
  std::vector<double> cholesky_;      // lower triangle, row-major n x n
  std::vector<double> sqrt_spectrum_;  // sqrt(lambda_k / m), circulant size m
};

CoefficientDraw draw_coefficients(const CorrelationModel& model, int n, std::uint64_t seed);

/// f_n(t) = sum_k a_k cos(kt) + b_k sin(kt) at each grid point. An
/// equispaced grid 2 pi j / M with M >= 2n + 2 goes through one FFT; any other
/// grid is summed directly.
std::vector<double> evaluate_polynomial(const CoefficientDraw& draw, std::span<const double> grid);

/// f_n at t_j = 2 pi j / M, j = 0..M-1, through an FFT of length M (M > n).
std::vector<double> evaluate_on_uniform_grid(const CoefficientDraw& draw, int grid_size);

/// f_n(t) by Horner's scheme in e^{it}.
double evaluate_at(const CoefficientDraw& draw, double t);

struct ZeroCount {
  int count = 0;
  int near_tangencies = 0;
  std::vector<double> roots;
};

/// Real zeros of f_n in [lo, hi) located by sign changes on the grid and
/// refined by bisection. Near-tangencies are flagged, never counted.
ZeroCount count_zeros(const CoefficientDraw& draw, Interval interval,
                      const RootCountConfig& config = {});

struct MonteCarloResult {
  double mean = 0.0;
  double std_error = 0.0;
  int trials = 0;
  long near_tangencies = 0;
};

MonteCarloResult monte_carlo_zero_mean(const CorrelationModel& model, int n, int trials,
                                       Interval interval, std::uint64_t seed,
                                       const RootCountConfig& config = {}, unsigned threads = 1);

}  // namespace trigzeros
