#pragma once

#include <stdexcept>
#include <string>

namespace trigzeros {

/// A parameter or argument outside its declared domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Quadrature or refinement budget exhausted before reaching tolerance.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double best_estimate, double error_bound)
      : std::runtime_error(what), best_estimate_(best_estimate), error_bound_(error_bound) {}

  double best_estimate() const noexcept { return best_estimate_; }
  double error_bound() const noexcept { return error_bound_; }

 private:
  double best_estimate_;
  double error_bound_;
};

/// Two evaluators that must agree by construction disagree (evaluator bug).
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// The Gaussian vector (F_n(t), F_n'(t)) has a non-positive variance.
class DegenerateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The Toeplitz covariance of a correlation model is not positive definite.
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Circulant embedding of a Toeplitz covariance has a negative eigenvalue.
class EmbeddingError : public std::runtime_error {
 public:
  EmbeddingError(const std::string& what, double min_eigenvalue)
      : std::runtime_error(what), min_eigenvalue_(min_eigenvalue) {}
  double min_eigenvalue() const noexcept { return min_eigenvalue_; }

 private:
  double min_eigenvalue_;
};

}  // namespace trigzeros
