#include "trigzeros/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <string>
#include <utility>

#include "trigzeros/errors.hpp"
#include "trigzeros/parallel.hpp"
#include "trigzeros/summation.hpp"

namespace trigzeros {

void QuadratureConfig::validate() const {
  if (panels < 1) throw DomainError("quadrature: panels must be >= 1");
  if (points_per_panel < 1) throw DomainError("quadrature: points_per_panel must be >= 1");
  if (!(grading >= 1.0)) throw DomainError("quadrature: grading must be >= 1");
  if (max_refinements < 0) throw DomainError("quadrature: max_refinements must be >= 0");
  if (!(rel_tol > 0.0 && rel_tol < 1.0)) throw DomainError("quadrature: rel_tol must lie in (0, 1)");
  if (!(abs_tol >= 0.0)) throw DomainError("quadrature: abs_tol must be >= 0");
}

GaussLegendreRule::GaussLegendreRule(int order) {
  if (order < 1) throw DomainError("Gauss-Legendre order must be >= 1");
  nodes_.resize(order);
  weights_.resize(order);
  if (order == 1) {
    nodes_[0] = 0.0;
    weights_[0] = 2.0;
    return;
  }
  // Legendre P_order and its derivative at x.
  auto legendre = [order](double x) {
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= order; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    return std::pair{p1, order * (x * p1 - p0) / (x * x - 1.0)};
  };
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, dp] = legendre(x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre(x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes_[i] = -x;
    nodes_[order - 1 - i] = x;
    weights_[i] = w;
    weights_[order - 1 - i] = w;
  }
  if (order % 2 == 1) nodes_[order / 2] = 0.0;
}

double GaussLegendreRule::apply(const std::function<double(double)>& f, double a, double b) const {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  CompensatedSum sum;
  for (std::size_t i = 0; i < nodes_.size(); ++i) sum.add(weights_[i] * f(mid + half * nodes_[i]));
  return half * sum.value();
}

std::vector<double> graded_breakpoints(double lo, double hi, int panels, double grading) {
  if (panels < 1) throw DomainError("graded_breakpoints: panels must be >= 1");
  std::vector<double> widths(panels);
  double total = 0.0;
  for (int j = 0; j < panels; ++j) {
    widths[j] = std::pow(grading, std::min(j, panels - 1 - j));
    total += widths[j];
  }
  std::vector<double> breaks(panels + 1);
  breaks[0] = lo;
  double acc = 0.0;
  for (int j = 0; j < panels; ++j) {
    acc += widths[j];
    breaks[j + 1] = lo + (hi - lo) * (acc / total);
  }
  breaks[panels] = hi;
  return breaks;
}

namespace {

std::string format_tol(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

constexpr std::size_t kMaxActivePanels = std::size_t{1} << 16;

struct Segment {
  std::function<double(double)> f;
  double a;
  double b;
};

struct Panel {
  std::size_t segment;
  double a;
  double b;
  double value;
  double abs_value;
  int depth;
};

struct PanelSums {
  double value;
  double abs_value;
};

PanelSums apply_both(const GaussLegendreRule& rule, const std::function<double(double)>& f,
                     double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  CompensatedSum sum;
  CompensatedSum abs_sum;
  const auto& x = rule.nodes();
  const auto& w = rule.weights();
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double fx = f(mid + half * x[i]);
    sum.add(w[i] * fx);
    abs_sum.add(w[i] * std::abs(fx));
  }
  return {half * sum.value(), half * abs_sum.value()};
}

// Maps a lower end point blow-up of order `exponent` to a bounded integrand on [0, 1].
Segment desingularize(const std::function<double(double)>& f, double a, double b,
                      double exponent) {
  const double q = 1.0 / (1.0 - exponent);
  const double w = b - a;
  return {[f, a, w, q](double s) {
            if (s <= 0.0) return 0.0;
            const double sq = std::pow(s, q);
            return f(a + w * sq) * w * q * sq / s;
          },
          0.0, 1.0};
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double lo, double hi,
                           const QuadratureConfig& config, EndpointSingularity singular,
                           unsigned threads) {
  config.validate();
  if (!(lo <= hi)) throw DomainError("integrate: interval must satisfy lo <= hi");
  if (!(singular.at_lo >= 0.0 && singular.at_lo < 1.0))
    throw DomainError("integrate: singularity exponent must lie in [0, 1)");
  if (lo == hi) return {};

  std::vector<Segment> segments;
  if (singular.at_lo > 0.0)
    segments.push_back(desingularize(f, lo, hi, singular.at_lo));
  else
    segments.push_back({f, lo, hi});

  const GaussLegendreRule rule(config.points_per_panel);
  const double nseg = static_cast<double>(segments.size());
  const int panels_per_segment =
      std::max(1, static_cast<int>(std::ceil(config.panels / nseg)));

  std::vector<Panel> active;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    const auto breaks =
        graded_breakpoints(segments[s].a, segments[s].b, panels_per_segment, config.grading);
    for (int j = 0; j < panels_per_segment; ++j)
      active.push_back({s, breaks[j], breaks[j + 1], 0.0, 0.0, 0});
  }
  parallel_for(active.size(), threads, [&](std::size_t i) {
    auto& p = active[i];
    const auto r = apply_both(rule, segments[p.segment].f, p.a, p.b);
    p.value = r.value;
    p.abs_value = r.abs_value;
  });

  QuadratureResult result;
  result.evaluations = static_cast<long>(active.size()) * rule.order();
  CompensatedSum accepted;
  CompensatedSum accepted_abs;
  CompensatedSum accepted_err;
  int accepted_panels = 0;

  while (!active.empty()) {
    std::vector<PanelSums> left(active.size());
    std::vector<PanelSums> right(active.size());
    parallel_for(active.size(), threads, [&](std::size_t i) {
      const auto& p = active[i];
      const double mid = 0.5 * (p.a + p.b);
      left[i] = apply_both(rule, segments[p.segment].f, p.a, mid);
      right[i] = apply_both(rule, segments[p.segment].f, mid, p.b);
    });
    result.evaluations += 2L * rule.order() * static_cast<long>(active.size());

    CompensatedSum scale = accepted_abs;
    for (std::size_t i = 0; i < active.size(); ++i) scale.add(left[i].abs_value + right[i].abs_value);
    const double tol_total = std::max(config.rel_tol * scale.value(), config.abs_tol);

    std::vector<Panel> next;
    bool exhausted = false;
    for (std::size_t i = 0; i < active.size(); ++i) {
      const auto& p = active[i];
      const double fine = left[i].value + right[i].value;
      const double err = std::abs(fine - p.value);
      const auto& seg = segments[p.segment];
      const double share = (p.b - p.a) / (seg.b - seg.a) / nseg;
      if (!std::isfinite(fine))
        throw NumericalError("quadrature: integrand is not finite on [" + std::to_string(p.a) +
                                 ", " + std::to_string(p.b) + "]",
                             accepted.value(), std::numeric_limits<double>::infinity());
      if (err <= tol_total * share) {
        accepted.add(fine);
        accepted_abs.add(left[i].abs_value + right[i].abs_value);
        accepted_err.add(err);
        ++accepted_panels;
        continue;
      }
      if (p.depth + 1 > config.max_refinements) exhausted = true;
      const double mid = 0.5 * (p.a + p.b);
      next.push_back({p.segment, p.a, mid, left[i].value, left[i].abs_value, p.depth + 1});
      next.push_back({p.segment, mid, p.b, right[i].value, right[i].abs_value, p.depth + 1});
    }
    if (next.size() > kMaxActivePanels) exhausted = true;
    if (exhausted) {
      CompensatedSum best = accepted;
      CompensatedSum bound = accepted_err;
      for (const auto& p : next) best.add(p.value);
      for (std::size_t i = 0; i < active.size(); ++i)
        bound.add(std::abs(left[i].value + right[i].value - active[i].value));
      throw NumericalError("quadrature did not reach rel_tol " + format_tol(config.rel_tol) +
                               " within " + std::to_string(config.max_refinements) +
                               " refinements",
                           best.value(), bound.value());
    }
    active = std::move(next);
  }

  result.value = accepted.value();
  result.error_estimate = accepted_err.value();
  result.panels = accepted_panels;
  return result;
}

}  // namespace trigzeros
