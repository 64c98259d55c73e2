#include "trigzeros/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "trigzeros/errors.hpp"
#include "trigzeros/summation.hpp"

namespace trigzeros {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Explicit lattice terms |j| <= kLatticeTerms in the fGn spectral sum.
constexpr int kLatticeTerms = 64;

// Lags from which rho_H is evaluated through its binomial series in 1/k.
constexpr long long kFgnSeriesFrom = 8;

double fgn_rho(double hurst, long long k) {
  const double p = 2.0 * hurst;
  if (k == 0) return 1.0;
  const double kk = static_cast<double>(k);
  if (k < kFgnSeriesFrom) {
    return 0.5 * (std::pow(kk + 1.0, p) + std::pow(kk - 1.0, p) - 2.0 * std::pow(kk, p));
  }
  // (1+u)^p + (1-u)^p - 2 = 2 sum_{m>=1} binom(p, 2m) u^{2m}, u = 1/k.
  const double u2 = 1.0 / (kk * kk);
  double binom = 1.0;  // binom(p, j)
  double upow = 1.0;
  double sum = 0.0;
  for (int j = 0; j < 120; j += 2) {
    binom *= (p - j) / (j + 1.0);
    binom *= (p - j - 1.0) / (j + 2.0);
    upow *= u2;
    const double term = binom * upow;
    sum += term;
    if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
  }
  return std::pow(kk, p) * sum;
}

// sum_{j in Z} |2 pi j + y|^{-a} for 0 < y <= pi.
double fgn_lattice_sum(double a, double y) {
  CompensatedSum sum;
  // Each tail sum_{j > J} f(j), f(u) = (2 pi u +- y)^{-a}, by the midpoint
  // Euler-Maclaurin formula with u0 = J + 1/2:
  //   integral_{u0}^inf f + f'(u0) / 24 - 7 f'''(u0) / 5760.
  for (double shift : {y, -y}) {
    const double base = kTwoPi * (kLatticeTerms + 0.5) + shift;
    const double integral = std::pow(base, 1.0 - a) / (kTwoPi * (a - 1.0));
    const double d1 = -a * kTwoPi * std::pow(base, -a - 1.0);
    const double d3 =
        -a * (a + 1.0) * (a + 2.0) * kTwoPi * kTwoPi * kTwoPi * std::pow(base, -a - 3.0);
    sum.add(d1 / 24.0 - 7.0 * d3 / 5760.0);
    sum.add(integral);
  }
  for (int j = kLatticeTerms; j >= 1; --j) {
    sum.add(std::pow(kTwoPi * j + y, -a));
    sum.add(std::pow(kTwoPi * j - y, -a));
  }
  sum.add(std::pow(y, -a));
  return sum.value();
}

void check_hurst(double hurst) {
  if (!(hurst > 0.5 && hurst < 1.0))
    throw DomainError("fgn: Hurst parameter H must lie in (1/2, 1), got " + std::to_string(hurst));
}

void check_ratio(double r) {
  if (!(r > 0.0 && r < 1.0))
    throw DomainError("geometric: ratio r must lie in (0, 1), got " + std::to_string(r));
}

}  // namespace

double fgn_constant(double hurst) {
  return std::sin(std::numbers::pi * hurst) * std::tgamma(2.0 * hurst + 1.0);
}

CorrelationModel::CorrelationModel(CorrelationKind kind, double parameter, std::vector<double> table)
    : kind_(kind), parameter_(parameter), table_(std::move(table)) {}

CorrelationModel CorrelationModel::iid() { return {CorrelationKind::Iid, 0.0, {}}; }

CorrelationModel CorrelationModel::geometric(double ratio) {
  check_ratio(ratio);
  return {CorrelationKind::Geometric, ratio, {}};
}

CorrelationModel CorrelationModel::fractional_gaussian_noise(double hurst) {
  check_hurst(hurst);
  return {CorrelationKind::FractionalGaussianNoise, hurst, {}};
}

CorrelationModel CorrelationModel::tabulated(std::vector<double> values) {
  if (values.empty() || values[0] != 1.0)
    throw DomainError("tabulated: rho_0 must be present and equal to 1");
  for (std::size_t k = 0; k < values.size(); ++k)
    if (!(std::abs(values[k]) <= 1.0))
      throw DomainError("tabulated: |rho_" + std::to_string(k) + "| must be <= 1");
  return {CorrelationKind::Tabulated, 0.0, std::move(values)};
}

CorrelationModel CorrelationModel::from_config(const ModelConfig& config) {
  auto param = [&](const std::string& name) {
    const auto it = config.params.find(name);
    if (it == config.params.end())
      throw DomainError("model '" + config.kind + "' requires parameter '" + name + "'");
    return it->second;
  };
  auto only = [&](std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : config.params) {
      (void)value;
      if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
        throw DomainError("model '" + config.kind + "' has no parameter '" + key + "'");
    }
  };
  if (config.kind == "iid") {
    only({});
    return iid();
  }
  if (config.kind == "geometric") {
    only({"r"});
    return geometric(param("r"));
  }
  if (config.kind == "fgn") {
    only({"H"});
    return fractional_gaussian_noise(param("H"));
  }
  if (config.kind == "tabulated") {
    std::map<std::size_t, double> entries;
    for (const auto& [key, value] : config.params) {
      std::size_t k = 0;
      std::size_t used = 0;
      if (key.rfind("rho_", 0) != 0) throw DomainError("tabulated: unexpected parameter '" + key + "'");
      try {
        k = std::stoul(key.substr(4), &used);
      } catch (const std::exception&) {
        throw DomainError("tabulated: bad parameter name '" + key + "'");
      }
      if (used != key.size() - 4) throw DomainError("tabulated: bad parameter name '" + key + "'");
      entries[k] = value;
    }
    std::vector<double> values;
    for (const auto& [k, v] : entries) {
      if (k != values.size())
        throw DomainError("tabulated: missing rho_" + std::to_string(values.size()));
      values.push_back(v);
    }
    return tabulated(std::move(values));
  }
  throw DomainError("unknown correlation model kind '" + config.kind + "'");
}

ModelConfig CorrelationModel::to_config() const {
  switch (kind_) {
    case CorrelationKind::Iid:
      return {"iid", {}};
    case CorrelationKind::Geometric:
      return {"geometric", {{"r", parameter_}}};
    case CorrelationKind::FractionalGaussianNoise:
      return {"fgn", {{"H", parameter_}}};
    case CorrelationKind::Tabulated: {
      ModelConfig config{"tabulated", {}};
      for (std::size_t k = 0; k < table_.size(); ++k)
        config.params["rho_" + std::to_string(k)] = table_[k];
      return config;
    }
  }
  return {};
}

double CorrelationModel::psi_singularity_exponent() const noexcept {
  return kind_ == CorrelationKind::FractionalGaussianNoise ? 2.0 * parameter_ - 1.0 : 0.0;
}

std::string CorrelationModel::name() const {
  std::ostringstream os;
  switch (kind_) {
    case CorrelationKind::Iid:
      os << "iid";
      break;
    case CorrelationKind::Geometric:
      os << "geometric(r=" << parameter_ << ")";
      break;
    case CorrelationKind::FractionalGaussianNoise:
      os << "fgn(H=" << parameter_ << ")";
      break;
    case CorrelationKind::Tabulated:
      os << "tabulated(K=" << table_.size() - 1 << ")";
      break;
  }
  return os.str();
}

double CorrelationModel::rho(std::size_t k) const {
  switch (kind_) {
    case CorrelationKind::Iid:
      return k == 0 ? 1.0 : 0.0;
    case CorrelationKind::Geometric:
      return std::pow(parameter_, static_cast<double>(k));
    case CorrelationKind::FractionalGaussianNoise:
      return fgn_rho(parameter_, static_cast<long long>(k));
    case CorrelationKind::Tabulated:
      return k < table_.size() ? table_[k] : 0.0;
  }
  return 0.0;
}

double CorrelationModel::psi(double x) const {
  if (!(x > 0.0 && x < kTwoPi))
    throw DomainError("psi: x must lie in the open interval (0, 2 pi), got " + std::to_string(x));
  // psi is even and 2 pi periodic.
  const double y = x <= std::numbers::pi ? x : kTwoPi - x;
  switch (kind_) {
    case CorrelationKind::Iid:
      return 1.0;
    case CorrelationKind::Geometric: {
      const double r = parameter_;
      return (1.0 - r * r) / (1.0 - 2.0 * r * std::cos(y) + r * r);
    }
    case CorrelationKind::FractionalGaussianNoise: {
      const double h = parameter_;
      const double s = std::sin(0.5 * y);
      // 1 - cos y = 2 sin^2(y/2)
      return 4.0 * fgn_constant(h) * s * s * fgn_lattice_sum(2.0 * h + 1.0, y);
    }
    case CorrelationKind::Tabulated: {
      CompensatedSum sum;
      for (std::size_t k = table_.size(); k-- > 1;) sum.add(2.0 * table_[k] * std::cos(k * y));
      sum.add(1.0);
      return sum.value();
    }
  }
  return 0.0;
}

double rho_eval(const CorrelationModel& model, long long k) {
  if (k < 0) throw DomainError("rho: lag k must be >= 0");
  return model.rho(static_cast<std::size_t>(k));
}

double psi_eval(const CorrelationModel& model, double x) { return model.psi(x); }

HypothesisReport validate_hypotheses(const CorrelationModel& model, int grid_points,
                                     const QuadratureConfig& quad) {
  if (grid_points < 16) throw DomainError("validate_hypotheses: grid_points must be >= 16");
  HypothesisReport report;
  report.grid_points = grid_points;

  const double beta = model.psi_singularity_exponent();
  // psi is even about pi: integrate over (0, pi] and double.
  const auto l1 = integrate([&](double x) { return std::abs(model.psi(x)); }, 0.0,
                            std::numbers::pi, quad, {beta});
  report.l1_norm = l1.value / std::numbers::pi;
  report.l1_error = l1.error_estimate / std::numbers::pi;

  constexpr double margin = 1e-3;
  const double lo = margin;
  const double hi = kTwoPi - margin;
  const double step = (hi - lo) / (grid_points - 1);
  int best = 0;
  double best_value = model.psi(lo);
  for (int i = 1; i < grid_points; ++i) {
    const double v = model.psi(lo + step * i);
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }
  // Golden-section refinement on the two grid cells around the minimiser.
  double a = lo + step * std::max(0, best - 1);
  double b = lo + step * std::min(grid_points - 1, best + 1);
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = model.psi(c);
  double fd = model.psi(d);
  for (int iter = 0; iter < 200 && (b - a) > 1e-14; ++iter) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = model.psi(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = model.psi(d);
    }
  }
  const double x_ref = 0.5 * (a + b);
  const double v_ref = model.psi(x_ref);
  if (v_ref < best_value) {
    report.infimum_gamma = v_ref;
    report.argmin = x_ref;
  } else {
    report.infimum_gamma = best_value;
    report.argmin = lo + step * best;
  }
  report.passes = report.infimum_gamma > 0.0 && std::isfinite(report.l1_norm);
  return report;
}

std::string ModelConfig::to_json() const {
  nlohmann::json j;
  j["kind"] = kind;
  j["params"] = nlohmann::json::object();
  for (const auto& [k, v] : params) j["params"][k] = v;
  return j.dump();
}

ModelConfig ModelConfig::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("model config: ") + e.what());
  }
  if (!j.is_object() || j.size() != 2 || !j.contains("kind") || !j.contains("params") ||
      !j["kind"].is_string() || !j["params"].is_object())
    throw DomainError("model config must be an object with exactly the keys 'kind' and 'params'");
  ModelConfig config;
  config.kind = j["kind"].get<std::string>();
  for (const auto& [k, v] : j["params"].items()) {
    if (!v.is_number()) throw DomainError("model config: parameter '" + k + "' must be a number");
    config.params[k] = v.get<double>();
  }
  return config;
}

}  // namespace trigzeros
