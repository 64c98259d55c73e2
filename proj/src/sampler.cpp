#include "trigzeros/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

#include "trigzeros/errors.hpp"
#include "trigzeros/parallel.hpp"
#include "trigzeros/summation.hpp"

namespace trigzeros {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kEigenvalueClip = -1e-8;
constexpr int kMinGrid = 512;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::mt19937_64 stream(std::uint64_t seed, std::uint32_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), index,
                    0x7a65726fU};
  return std::mt19937_64(seq);
}

bool is_uniform_period_grid(std::span<const double> grid) {
  const double m = static_cast<double>(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j)
    if (std::abs(grid[j] - kTwoPi * j / m) > 1e-12) return false;
  return true;
}

int sign_of(double v) { return v < 0.0 ? -1 : 1; }

}  // namespace

void RootCountConfig::validate() const {
  if (oversampling < 4) throw DomainError("root counting: oversampling must be >= 4");
  if (!(refine_tol > 0.0)) throw DomainError("root counting: refine_tol must be > 0");
  if (!(tangency_margin > 0.0)) throw DomainError("root counting: tangency_margin must be > 0");
}

int RootCountConfig::grid_size(int n) const { return std::max(kMinGrid, oversampling * n); }

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

CoefficientSampler::CoefficientSampler(const CorrelationModel& model, int n)
    : CoefficientSampler(model, n,
                         n <= kCholeskyMaxDegree ? SamplingMethod::Cholesky
                                                 : SamplingMethod::CirculantEmbedding) {}

CoefficientSampler::CoefficientSampler(const CorrelationModel& model, int n, SamplingMethod method)
    : n_(n), method_(method), model_id_(model.name()) {
  if (n < 1) throw DomainError("sampler: degree n must be >= 1");
  if (method == SamplingMethod::Cholesky) {
    Eigen::MatrixXd cov(n, n);
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) cov(k, l) = model.rho(static_cast<std::size_t>(std::abs(k - l)));
    const Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success)
      throw ModelError("sampler: Toeplitz covariance of " + model_id_ +
                       " is not positive definite at n=" + std::to_string(n));
    const Eigen::MatrixXd lower = llt.matrixL();
    cholesky_.resize(static_cast<std::size_t>(n) * n);
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) cholesky_[static_cast<std::size_t>(k) * n + l] = lower(k, l);
    return;
  }
  // Minimal embedding: first row (rho_0, ..., rho_n, rho_{n-1}, ..., rho_1).
  const int m = std::max(2, 2 * n);
  std::vector<std::complex<double>> row(m);
  for (int j = 0; j <= m / 2; ++j) {
    const double r = model.rho(static_cast<std::size_t>(j));
    row[j] = r;
    if (j > 0 && j < m - j) row[m - j] = r;
  }
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> spectrum;
  fft.fwd(spectrum, row);
  sqrt_spectrum_.resize(m);
  double min_eig = 0.0;
  for (int k = 0; k < m; ++k) {
    const double lambda = spectrum[k].real();
    min_eig = std::min(min_eig, lambda);
    if (lambda < kEigenvalueClip)
      throw EmbeddingError("sampler: circulant embedding of " + model_id_ + " at n=" +
                               std::to_string(n) + " has eigenvalue " + std::to_string(lambda),
                           lambda);
    sqrt_spectrum_[k] = std::sqrt(std::max(lambda, 0.0) / m);
  }
}

std::vector<double> CoefficientSampler::sample(std::mt19937_64& rng) const {
  std::normal_distribution<double> normal;
  std::vector<double> out(n_);
  if (method_ == SamplingMethod::Cholesky) {
    std::vector<double> z(n_);
    for (auto& v : z) v = normal(rng);
    for (int k = 0; k < n_; ++k) {
      const double* row = cholesky_.data() + static_cast<std::size_t>(k) * n_;
      double acc = 0.0;
      for (int l = 0; l <= k; ++l) acc += row[l] * z[l];
      out[k] = acc;
    }
    return out;
  }
  const std::size_t m = sqrt_spectrum_.size();
  std::vector<std::complex<double>> w(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double re = normal(rng);
    const double im = normal(rng);
    w[k] = sqrt_spectrum_[k] * std::complex<double>(re, im);
  }
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> y;
  fft.fwd(y, w);
  for (int k = 0; k < n_; ++k) out[k] = y[k].real();
  return out;
}

CoefficientDraw CoefficientSampler::draw(std::uint64_t seed) const {
  auto rng_a = stream(seed, 0);
  auto rng_b = stream(seed, 1);
  CoefficientDraw d;
  d.a = sample(rng_a);
  d.b = sample(rng_b);
  d.seed = seed;
  d.model_id = model_id_;
  return d;
}

CoefficientDraw draw_coefficients(const CorrelationModel& model, int n, std::uint64_t seed) {
  return CoefficientSampler(model, n).draw(seed);
}

double evaluate_at(const CoefficientDraw& draw, double t) {
  // f(t) = Re sum_k (a_k - i b_k) z^k, z = e^{it}
  const std::complex<double> z(std::cos(t), std::sin(t));
  std::complex<double> p(0.0, 0.0);
  for (int k = draw.degree(); k >= 1; --k) p = p * z + std::complex<double>(draw.a[k - 1], -draw.b[k - 1]);
  return (p * z).real();
}

std::vector<double> evaluate_on_uniform_grid(const CoefficientDraw& draw, int grid_size) {
  const int n = draw.degree();
  if (grid_size <= n) throw DomainError("evaluate_on_uniform_grid: grid size must exceed the degree");
  std::vector<std::complex<double>> buffer(grid_size);
  for (int k = 1; k <= n; ++k) buffer[k] = {draw.a[k - 1], draw.b[k - 1]};
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> out;
  fft.fwd(out, buffer);
  std::vector<double> values(grid_size);
  for (int j = 0; j < grid_size; ++j) values[j] = out[j].real();
  return values;
}

std::vector<double> evaluate_polynomial(const CoefficientDraw& draw, std::span<const double> grid) {
  const int n = draw.degree();
  if (static_cast<long>(grid.size()) >= 2L * n + 2 && is_uniform_period_grid(grid))
    return evaluate_on_uniform_grid(draw, static_cast<int>(grid.size()));
  std::vector<double> values(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    CompensatedSum sum;
    for (int k = n; k >= 1; --k)
      sum.add(draw.a[k - 1] * std::cos(k * grid[j]) + draw.b[k - 1] * std::sin(k * grid[j]));
    values[j] = sum.value();
  }
  return values;
}

ZeroCount count_zeros(const CoefficientDraw& draw, Interval interval, const RootCountConfig& config) {
  config.validate();
  if (!(interval.lo >= 0.0 && interval.lo < interval.hi && interval.hi <= kTwoPi))
    throw DomainError("count_zeros: interval must satisfy 0 <= lo < hi <= 2 pi");
  const int n = draw.degree();
  const int m = config.grid_size(n);
  const auto grid_values = evaluate_on_uniform_grid(draw, m);

  std::vector<double> nodes;
  std::vector<double> values;
  nodes.reserve(m + 2);
  values.reserve(m + 2);
  const double step = kTwoPi / m;
  const long first = static_cast<long>(std::ceil(interval.lo / step));
  if (first * step != interval.lo) {
    nodes.push_back(interval.lo);
    values.push_back(evaluate_at(draw, interval.lo));
  }
  for (long j = first; j < m && j * step < interval.hi; ++j) {
    nodes.push_back(j * step);
    values.push_back(grid_values[j]);
  }
  nodes.push_back(interval.hi);
  values.push_back(interval.hi == kTwoPi ? grid_values[0] : evaluate_at(draw, interval.hi));

  ZeroCount result;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    if (sign_of(values[i]) == sign_of(values[i + 1])) continue;
    double lo = nodes[i];
    double hi = nodes[i + 1];
    const int s_lo = sign_of(values[i]);
    for (int iter = 0; iter < 200 && hi - lo > config.refine_tol; ++iter) {
      const double mid = 0.5 * (lo + hi);
      if (sign_of(evaluate_at(draw, mid)) == s_lo)
        lo = mid;
      else
        hi = mid;
    }
    result.roots.push_back(0.5 * (lo + hi));
  }
  for (std::size_t i = 1; i + 1 < nodes.size(); ++i) {
    const double v = std::abs(values[i]);
    if (v < config.tangency_margin && v <= std::abs(values[i - 1]) && v <= std::abs(values[i + 1]) &&
        sign_of(values[i - 1]) == sign_of(values[i]) && sign_of(values[i + 1]) == sign_of(values[i]))
      ++result.near_tangencies;
  }
  // Roots closer than the bracket width are one root.
  std::vector<double> unique;
  for (double r : result.roots)
    if (unique.empty() || r - unique.back() >= config.refine_tol) unique.push_back(r);
  result.roots = std::move(unique);
  result.count = static_cast<int>(result.roots.size());
  if (result.count > 2 * n)
    throw ConsistencyError("count_zeros: " + std::to_string(result.count) +
                           " zeros exceed the 2n cap for n=" + std::to_string(n));
  return result;
}

MonteCarloResult monte_carlo_zero_mean(const CorrelationModel& model, int n, int trials,
                                       Interval interval, std::uint64_t seed,
                                       const RootCountConfig& config, unsigned threads) {
  if (trials < 2) throw DomainError("monte_carlo_zero_mean: trials must be >= 2");
  config.validate();
  const CoefficientSampler sampler(model, n);
  std::vector<int> counts(trials);
  std::vector<int> tangencies(trials);
  parallel_for(static_cast<std::size_t>(trials), threads, [&](std::size_t i) {
    const auto draw = sampler.draw(derive_seed(seed, i));
    const auto zc = count_zeros(draw, interval, config);
    counts[i] = zc.count;
    tangencies[i] = zc.near_tangencies;
  });
  CompensatedSum sum;
  long flagged = 0;
  for (int i = 0; i < trials; ++i) {
    sum.add(counts[i]);
    flagged += tangencies[i];
  }
  const double mean = sum.value() / trials;
  CompensatedSum sq;
  for (int c : counts) sq.add((c - mean) * (c - mean));
  const double var = sq.value() / (trials - 1);
  return {mean, std::sqrt(var / trials), trials, flagged};
}

}  // namespace trigzeros
