#include "commands.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>
#include <variant>

#include <CLI11.hpp>
#include <json.hpp>

#include "trigzeros/covariance.hpp"
#include "trigzeros/errors.hpp"
#include "trigzeros/kernels.hpp"
#include "trigzeros/manifest.hpp"
#include "trigzeros/sampler.hpp"

namespace trigzeros::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

const std::vector<std::string> kCommands{"validate", "spectral",  "kernels",   "covariance",
                                         "kacrice",  "theorem1", "montecarlo"};

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::string strip(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (text.empty() || ec != std::errc() || ptr != last)
    throw UsageError("not a number: '" + text + "'");
  return v;
}

// [c][*]pi[/d] or a plain number.
double parse_term(const std::string& term) {
  const auto pos = term.find("pi");
  if (pos == std::string::npos) return parse_number(term);
  std::string coef = term.substr(0, pos);
  if (!coef.empty() && coef.back() == '*') coef.pop_back();
  double value = (coef.empty() ? 1.0 : parse_number(coef)) * std::numbers::pi;
  const std::string rest = term.substr(pos + 2);
  if (rest.empty()) return value;
  if (rest[0] != '/') throw UsageError("malformed angle term '" + term + "'");
  return value / parse_number(rest.substr(1));
}

// ---------------------------------------------------------------------------
// Tabular results and their serialization.

using Cell = std::variant<double, long long, std::string, bool>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  bool single_record = false;  // JSON as one object instead of an array
};

std::string cell_text(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  if (const auto* b = std::get_if<bool>(&c)) return *b ? "true" : "false";
  return std::get<std::string>(c);
}

ordered_json cell_json(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return std::isfinite(*d) ? ordered_json(*d) : ordered_json(nullptr);
  if (const auto* i = std::get_if<long long>(&c)) return *i;
  if (const auto* b = std::get_if<bool>(&c)) return *b;
  return std::get<std::string>(c);
}

std::string to_csv(const Table& t) {
  std::string s;
  for (std::size_t j = 0; j < t.columns.size(); ++j) s += (j ? "," : "") + t.columns[j];
  s += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t j = 0; j < row.size(); ++j) s += (j ? "," : "") + cell_text(row[j]);
    s += '\n';
  }
  return s;
}

std::string to_json_text(const Table& t) {
  auto record = [&](const std::vector<Cell>& row) {
    ordered_json o = ordered_json::object();
    for (std::size_t j = 0; j < row.size(); ++j) o[t.columns[j]] = cell_json(row[j]);
    return o;
  };
  ordered_json j;
  if (t.single_record && t.rows.size() == 1) {
    j = record(t.rows.front());
  } else {
    j = ordered_json::array();
    for (const auto& row : t.rows) j.push_back(record(row));
  }
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Options.

struct Global {
  std::string out;
  std::string format;
  std::uint64_t seed = 0;
  bool seed_given = false;
  unsigned threads = 1;
  std::string config;
};

struct ModelArgs {
  std::string spec;
  std::string params;
};

struct CommandResult {
  Table table;
  std::string model;
  std::map<std::string, double> params;
  std::optional<std::uint64_t> seed;
  int exit_code = kSuccess;
  std::string message;  // printed to the error stream on a non-zero exit
};

CorrelationModel make_model(const ModelArgs& m) {
  return CorrelationModel::from_config(parse_model_spec(m.spec, m.params));
}

void add_model_params(CommandResult& r, const CorrelationModel& model, const std::string& prefix = "") {
  for (const auto& [k, v] : model.to_config().params) r.params[prefix + k] = v;
}

std::vector<double> linear_grid(Interval range, int points) {
  if (points < 2) throw UsageError("--points must be >= 2");
  if (!(range.lo < range.hi)) throw UsageError("range must satisfy lo < hi");
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i) grid[i] = range.lo + (range.hi - range.lo) * i / (points - 1);
  grid.back() = range.hi;
  return grid;
}

std::string interval_text(Interval k) { return format_number(k.lo) + ":" + format_number(k.hi); }

QuadratureConfig kac_rice_quadrature(double rel_tol) {
  auto q = default_kac_rice_quadrature();
  q.rel_tol = rel_tol;
  q.validate();
  return q;
}

// ---------------------------------------------------------------------------
// Commands.

CommandResult cmd_validate(const ModelArgs& m, int grid_points) {
  const auto model = make_model(m);
  const auto report = validate_hypotheses(model, grid_points);
  CommandResult r;
  r.model = model.name();
  add_model_params(r, model);
  r.params["grid_points"] = grid_points;
  r.table.single_record = true;
  r.table.columns = {"model",  "l1_norm",     "l1_error", "infimum_gamma",
                     "argmin", "grid_points", "passes",   "edge_constant"};
  r.table.rows.push_back({model.name(), report.l1_norm, report.l1_error, report.infimum_gamma,
                          report.argmin, static_cast<long long>(report.grid_points), report.passes,
                          report.passes ? edge_constant(report) : std::nan("")});
  if (!report.passes) {
    r.exit_code = kHypothesisFailure;
    r.message = "hypotheses fail for " + model.name() + ": inf psi = " +
                format_number(report.infimum_gamma) + " at x = " + format_number(report.argmin);
  }
  return r;
}

CommandResult cmd_spectral(const std::vector<std::string>& specs, Interval range, int points) {
  std::vector<CorrelationModel> models;
  for (const auto& s : specs) models.push_back(make_model({s, ""}));
  CommandResult r;
  r.table.columns.push_back("x");
  for (std::size_t i = 0; i < models.size(); ++i) {
    r.table.columns.push_back(models[i].name());
    r.model += (i ? "," : "") + models[i].name();
    add_model_params(r, models[i], models.size() > 1 ? "model" + std::to_string(i) + "." : "");
  }
  r.params["points"] = points;
  for (double x : linear_grid(range, points)) {
    std::vector<Cell> row{x};
    for (const auto& model : models) row.emplace_back(model.psi(x));
    r.table.rows.push_back(std::move(row));
  }
  return r;
}

CommandResult cmd_kernels(const std::vector<int>& degrees, Interval range, int points, bool fejer) {
  std::vector<KernelFamily> families;
  for (int n : degrees) families.emplace_back(n);
  CommandResult r;
  r.model = "kernels";
  r.table.columns.push_back("x");
  for (const auto& k : families) {
    const std::string n = std::to_string(k.degree());
    if (fejer) {
      r.table.columns.push_back("K_" + n);
      r.table.columns.push_back("Kprime_" + n);
    }
    r.table.columns.push_back("L_" + n);
  }
  r.params["points"] = points;
  for (double x : linear_grid(range, points)) {
    std::vector<Cell> row{x};
    for (const auto& k : families) {
      if (fejer) {
        row.emplace_back(k.fejer(x));
        row.emplace_back(k.fejer_derivative_periodic(x));
      }
      row.emplace_back(k.l_kernel(x));
    }
    r.table.rows.push_back(std::move(row));
  }
  return r;
}

CommandResult cmd_covariance(const ModelArgs& m, int n, Interval range, int points) {
  const auto model = make_model(m);
  const CovarianceEvaluator evaluator(model, n);
  CommandResult r;
  r.model = model.name();
  add_model_params(r, model);
  r.params["n"] = n;
  r.params["points"] = points;
  r.table.columns = {"t", "var_f", "var_fprime", "cov_cross"};
  for (double t : linear_grid(range, points)) {
    const auto c = evaluator.triple(t);
    r.table.rows.push_back({t, c.var_f, c.var_fprime, c.cov_cross});
  }
  return r;
}

CommandResult cmd_kacrice(const ModelArgs& m, const std::vector<int>& degrees, Interval interval,
                          double rel_tol, unsigned threads) {
  const auto model = make_model(m);
  const auto quad = kac_rice_quadrature(rel_tol);
  CommandResult r;
  r.model = model.name();
  add_model_params(r, model);
  r.params["rel_tol"] = rel_tol;
  r.table.columns = {"n", "interval", "value", "error_estimate", "value_over_n"};
  for (int n : degrees) {
    const auto est = expected_zeros(model, n, interval, quad, threads);
    r.table.rows.push_back({static_cast<long long>(n), interval_text(interval), est.value,
                            est.error_estimate, est.value / n});
  }
  return r;
}

CommandResult cmd_theorem1(const ModelArgs& m, const std::vector<int>& degrees, double eps,
                           double rel_tol, int mc_trials, int oversampling, std::uint64_t seed,
                           unsigned threads) {
  const auto model = make_model(m);
  if (!(eps > 0.0 && eps < std::numbers::pi)) throw UsageError("--eps must lie in (0, pi)");
  if (mc_trials == 1 || mc_trials < 0) throw UsageError("--montecarlo needs at least 2 trials");
  const auto report = validate_hypotheses(model);
  CommandResult r;
  r.model = model.name();
  add_model_params(r, model);
  r.params["eps"] = eps;
  r.params["rel_tol"] = rel_tol;
  if (!report.passes) {
    r.exit_code = kHypothesisFailure;
    r.message = "hypotheses fail for " + model.name() + "; the limit theorem does not apply";
    return r;
  }
  const auto quad = kac_rice_quadrature(rel_tol);
  const auto rows = normalized_limit_table(model, degrees, full_period(), quad, threads);
  const Interval bulk{eps, 2.0 * std::numbers::pi - eps};
  r.table.columns = {"n", "value", "error_estimate", "value_over_n", "bulk_over_n", "edge_over_n"};
  if (mc_trials > 0) {
    r.table.columns.push_back("mc_mean_over_n");
    r.table.columns.push_back("mc_std_error_over_n");
    r.params["montecarlo"] = mc_trials;
    r.params["oversampling"] = oversampling;
    r.seed = seed;
  }
  r.table.columns.push_back("deviation");
  RootCountConfig rc;
  rc.oversampling = oversampling;
  for (const auto& row : rows) {
    const double n = row.n;
    const double bulk_value = expected_zeros(model, row.n, bulk, quad, threads).value;
    std::vector<Cell> cells{static_cast<long long>(row.n), row.value, row.error_estimate,
                            row.value_over_n, bulk_value / n,
                            2.0 * edge_bound(report, row.n, eps) / n};
    if (mc_trials > 0) {
      const auto mc = monte_carlo_zero_mean(model, row.n, mc_trials, full_period(),
                                            derive_seed(seed, static_cast<std::uint64_t>(row.n)), rc,
                                            threads);
      cells.emplace_back(mc.mean / n);
      cells.emplace_back(mc.std_error / n);
    }
    cells.emplace_back(std::abs(row.value_over_n - theorem_limit()));
    r.table.rows.push_back(std::move(cells));
  }
  return r;
}

CommandResult cmd_montecarlo(const ModelArgs& m, int n, int trials, Interval interval,
                             int oversampling, bool compare, std::uint64_t seed, unsigned threads) {
  const auto model = make_model(m);
  RootCountConfig rc;
  rc.oversampling = oversampling;
  const auto mc = monte_carlo_zero_mean(model, n, trials, interval, seed, rc, threads);
  CommandResult r;
  r.model = model.name();
  add_model_params(r, model);
  r.params["n"] = n;
  r.params["trials"] = trials;
  r.params["oversampling"] = oversampling;
  r.seed = seed;
  r.table.single_record = true;
  r.table.columns = {"n", "interval", "mean", "std_error", "trials", "near_tangencies"};
  std::vector<Cell> row{static_cast<long long>(n), interval_text(interval), mc.mean, mc.std_error,
                        static_cast<long long>(mc.trials), static_cast<long long>(mc.near_tangencies)};
  if (compare) {
    const double kr = expected_zeros(model, n, interval, default_kac_rice_quadrature(), threads).value;
    r.table.columns.push_back("kac_rice");
    r.table.columns.push_back("z_score");
    row.emplace_back(kr);
    row.emplace_back(mc.std_error > 0.0 ? (mc.mean - kr) / mc.std_error
                                        : (std::abs(mc.mean - kr) <= 1e-9 * std::max(1.0, std::abs(kr))
                                               ? 0.0
                                               : std::copysign(INFINITY, mc.mean - kr)));
  }
  r.table.rows.push_back(std::move(row));
  return r;
}

// ---------------------------------------------------------------------------

std::optional<std::string> config_path(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw UsageError("--config needs a file name");
      return args[i + 1];
    }
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  return std::nullopt;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f || !(f << text) || !f.flush()) throw UsageError("cannot write '" + path + "'");
}

}  // namespace

std::string format_number(double value) {
  if (value == 0.0) value = 0.0;  // no "-0"
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  (void)ec;
  return std::string(buf, ptr);
}

double parse_angle(const std::string& text) {
  std::string s;
  for (char c : lower(text))
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw UsageError("empty angle");
  double total = 0.0;
  std::size_t i = 0;
  while (i < s.size()) {
    double sign = 1.0;
    if (s[i] == '+' || s[i] == '-') {
      sign = s[i] == '-' ? -1.0 : 1.0;
      ++i;
    }
    std::size_t j = i;
    // A term ends at the next sign that is not part of an exponent.
    while (j < s.size() && !((s[j] == '+' || s[j] == '-') && j > i && s[j - 1] != 'e')) ++j;
    if (j == i) throw UsageError("malformed angle '" + text + "'");
    total += sign * parse_term(s.substr(i, j - i));
    i = j;
  }
  return total;
}

Interval parse_interval(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos || text.find(':', colon + 1) != std::string::npos)
    throw UsageError("interval must look like lo:hi, got '" + text + "'");
  return {parse_angle(text.substr(0, colon)), parse_angle(text.substr(colon + 1))};
}

ModelConfig parse_model_spec(const std::string& spec, const std::string& params) {
  ModelConfig config;
  const auto colon = spec.find(':');
  config.kind = lower(strip(spec.substr(0, colon)));
  if (config.kind.empty()) throw UsageError("--model needs a kind (iid, geometric, fgn, tabulated)");
  auto add_pairs = [&](const std::string& text) {
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = strip(item);
      if (item.empty()) continue;
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw UsageError("model parameter must be name=value, got '" + item + "'");
      config.params[strip(item.substr(0, eq))] = parse_number(strip(item.substr(eq + 1)));
    }
  };
  if (colon != std::string::npos) add_pairs(spec.substr(colon + 1));
  const std::string p = strip(params);
  if (!p.empty() && p.front() == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(p);
    } catch (const nlohmann::json::exception& e) {
      throw UsageError(std::string("--params is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw UsageError("--params JSON must be an object");
    for (const auto& [k, v] : j.items()) {
      if (!v.is_number()) throw UsageError("--params value for '" + k + "' must be a number");
      config.params[k] = v.get<double>();
    }
  } else {
    add_pairs(p);
  }
  return config;
}

std::vector<std::string> merge_config(const std::vector<std::string>& args,
                                      const std::string& config_json) {
  nlohmann::json config;
  try {
    config = nlohmann::json::parse(config_json);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("config file is not valid JSON: ") + e.what());
  }
  if (!config.is_object()) throw UsageError("config file must hold a JSON object");

  auto is_set = [&](const std::string& name) {
    return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
      return a == "--" + name || a.rfind("--" + name + "=", 0) == 0;
    });
  };
  auto scalar = [](const nlohmann::json& v, const std::string& key) -> std::string {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
    if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
    if (v.is_number()) return format_number(v.get<double>());
    throw UsageError("config value for '" + key + "' has an unsupported type");
  };

  std::vector<std::string> merged = args;
  const bool has_command = std::any_of(args.begin(), args.end(), [](const std::string& a) {
    return std::find(kCommands.begin(), kCommands.end(), a) != kCommands.end();
  });
  if (config.contains("command") && !has_command) {
    merged.insert(merged.begin(), scalar(config["command"], "command"));
  }
  for (const auto& [raw_key, value] : config.items()) {
    std::string key = raw_key;
    if (key.rfind("--", 0) == 0) key = key.substr(2);
    if (key == "command" || key == "config" || is_set(key)) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) merged.push_back("--" + key);
    } else if (value.is_array()) {
      for (const auto& v : value) {
        merged.push_back("--" + key);
        merged.push_back(scalar(v, key));
      }
    } else if (key == "model" && value.is_object()) {
      const auto mc = ModelConfig::from_json(value.dump());
      std::string spec = mc.kind;
      char sep = ':';
      for (const auto& [k, v] : mc.params) {
        spec += sep + k + "=" + format_number(v);
        sep = ',';
      }
      merged.push_back("--model");
      merged.push_back(spec);
    } else if (!value.is_null()) {
      merged.push_back("--" + key);
      merged.push_back(scalar(value, key));
    }
  }
  return merged;
}

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args = raw_args;
  try {
    if (const auto path = config_path(args)) args = merge_config(args, read_file(*path));
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }

  CLI::App app{"Expected number of real zeros of random trigonometric polynomials with "
               "correlated Gaussian coefficients.",
               "trigzeros"};
  app.fallthrough();
  app.require_subcommand(1);
  Global g;
  app.add_option("--out", g.out, "Output file; 'csv' or 'json' alone selects the format instead");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  auto* seed_opt = app.add_option("--seed", g.seed, "Base seed of the random streams");
  app.add_option("--threads", g.threads, "Worker threads (0 = all cores)");
  app.add_option("--config", g.config, "JSON file supplying any flag; the command line wins");

  ModelArgs model_args;
  auto add_model = [&](CLI::App* sub) {
    sub->add_option("--model", model_args.spec, "kind[:name=value,...], kind in iid, geometric, fgn, tabulated")
        ->required();
    sub->add_option("--params", model_args.params, "Model parameters: name=value,... or a JSON object");
  };

  int grid_points = 4096;
  auto* validate = app.add_subcommand("validate", "Check the spectral hypotheses for a model");
  add_model(validate);
  validate->add_option("--grid-points", grid_points, "Grid size for the infimum search");

  std::vector<std::string> spectral_models{"fgn:H=0.6", "fgn:H=0.75", "fgn:H=0.9"};
  std::string range = "1e-3:2pi-1e-3";
  int points = 2048;
  auto* spectral = app.add_subcommand("spectral", "Tabulate spectral densities psi(x)");
  spectral->add_option("--model", spectral_models, "Model spec, repeatable")->capture_default_str();
  spectral->add_option("--range", range, "Grid range lo:hi inside (0, 2pi)")->capture_default_str();
  spectral->add_option("--points", points, "Grid points")->capture_default_str();

  std::vector<int> kernel_degrees{2, 5, 10, 20};
  std::string kernel_range = "0:2pi";
  int kernel_points = 1024;
  bool with_fejer = false;
  auto* kernels = app.add_subcommand("kernels", "Tabulate the kernels L_n (and K_n, K_n')");
  kernels->add_option("--n", kernel_degrees, "Degrees, repeatable")->delimiter(',')->capture_default_str();
  kernels->add_option("--range", kernel_range, "Grid range lo:hi")->capture_default_str();
  kernels->add_option("--points", kernel_points, "Grid points")->capture_default_str();
  kernels->add_flag("--fejer", with_fejer, "Also emit K_n and K_n'");

  int cov_degree = 0;
  std::string cov_range = "0:2pi";
  int cov_points = 512;
  auto* covariance = app.add_subcommand("covariance", "Tabulate the moments of (F_n, F_n')");
  add_model(covariance);
  covariance->add_option("--n", cov_degree, "Degree")->required();
  covariance->add_option("--range", cov_range, "Grid range lo:hi")->capture_default_str();
  covariance->add_option("--points", cov_points, "Grid points")->capture_default_str();

  std::vector<int> kr_degrees;
  std::string interval = "0:2pi";
  double rel_tol = default_kac_rice_quadrature().rel_tol;
  auto* kacrice = app.add_subcommand("kacrice", "Expected zero counts by the Kac-Rice formula");
  add_model(kacrice);
  kacrice->add_option("--n", kr_degrees, "Degrees, repeatable")->delimiter(',')->required();
  kacrice->add_option("--interval", interval, "Interval lo:hi within [0, 2pi]")->capture_default_str();
  kacrice->add_option("--rel-tol", rel_tol, "Quadrature relative tolerance")->capture_default_str();

  std::vector<int> t1_degrees{100, 400, 1600};
  double eps = 1e-3;
  int mc_trials = 0;
  int oversampling = RootCountConfig{}.oversampling;
  auto* theorem1 = app.add_subcommand("theorem1", "Convergence table of E[N_n]/n to 2/sqrt(3)");
  add_model(theorem1);
  theorem1->add_option("--n", t1_degrees, "Increasing degrees, repeatable")->delimiter(',')->capture_default_str();
  theorem1->add_option("--eps", eps, "Edge width for the bulk/edge split")->capture_default_str();
  theorem1->add_option("--rel-tol", rel_tol, "Quadrature relative tolerance")->capture_default_str();
  theorem1->add_option("--montecarlo", mc_trials, "Monte Carlo trials per row (0 = off)")->capture_default_str();
  theorem1->add_option("--oversampling", oversampling, "Root-finding grid points per degree")->capture_default_str();

  int mc_degree = 0;
  int trials = 1000;
  bool compare = false;
  auto* montecarlo = app.add_subcommand("montecarlo", "Empirical mean zero count");
  add_model(montecarlo);
  montecarlo->add_option("--n", mc_degree, "Degree")->required();
  montecarlo->add_option("--trials", trials, "Number of trials")->capture_default_str();
  montecarlo->add_option("--interval", interval, "Interval lo:hi within [0, 2pi]")->capture_default_str();
  montecarlo->add_option("--oversampling", oversampling, "Root-finding grid points per degree")->capture_default_str();
  montecarlo->add_flag("--compare", compare, "Add the Kac-Rice value and a z-score");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream diag;
    const int code = app.exit(e, out, diag);
    if (code != 0) err << "error: " << e.what() << "\nRun with --help for usage.\n";
    return code == 0 ? kSuccess : kUsageError;
  }
  g.seed_given = seed_opt->count() > 0;
  const unsigned threads = g.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : g.threads;
  const std::string command = app.get_subcommands().front()->get_name();

  CommandResult result;
  std::string format;
  std::string out_path;
  try {
    // --out names a file, except that a bare 'csv' or 'json' selects the format.
    out_path = g.out;
    format = g.format;
    if (out_path == "csv" || out_path == "json") {
      if (!format.empty() && format != out_path)
        throw UsageError("--out " + out_path + " conflicts with --format " + format);
      format = out_path;
      out_path.clear();
    }
    if (format.empty()) {
      const bool json_name = out_path.size() >= 5 && out_path.compare(out_path.size() - 5, 5, ".json") == 0;
      format = json_name ? "json" : "csv";
    }

    if (command == "validate") {
      result = cmd_validate(model_args, grid_points);
    } else if (command == "spectral") {
      result = cmd_spectral(spectral_models, parse_interval(range), points);
    } else if (command == "kernels") {
      result = cmd_kernels(kernel_degrees, parse_interval(kernel_range), kernel_points, with_fejer);
    } else if (command == "covariance") {
      result = cmd_covariance(model_args, cov_degree, parse_interval(cov_range), cov_points);
    } else if (command == "kacrice") {
      result = cmd_kacrice(model_args, kr_degrees, parse_interval(interval), rel_tol, threads);
    } else if (command == "theorem1") {
      result = cmd_theorem1(model_args, t1_degrees, eps, rel_tol, mc_trials, oversampling, g.seed,
                            threads);
    } else {
      result = cmd_montecarlo(model_args, mc_degree, trials, parse_interval(interval), oversampling,
                              compare, g.seed, threads);
    }
    if (g.seed_given) result.seed = g.seed;
    result.params["threads"] = threads;

    const std::string data = format == "json" ? to_json_text(result.table) : to_csv(result.table);
    RunManifest manifest;
    manifest.command = command;
    manifest.model = result.model;
    manifest.params = result.params;
    manifest.seed = result.seed;
    manifest.timestamp = utc_timestamp();
    const bool has_data = !result.table.columns.empty();
    if (out_path.empty()) {
      if (has_data) {
        out << data;
        manifest.outputs = {"-"};
      }
      err << manifest.to_json() << "\n";
    } else {
      if (has_data) {
        write_file(out_path, data);
        manifest.outputs = {out_path};
      }
      write_file(out_path + ".manifest.json", manifest.to_json() + "\n");
    }
    if (result.exit_code != kSuccess) err << "error: " << result.message << "\n";
    return result.exit_code;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const DegenerateError& e) {
    err << "error: " << e.what() << "\n";
    return kHypothesisFailure;
  } catch (const ModelError& e) {
    err << "error: " << e.what() << "\n";
    return kHypothesisFailure;
  } catch (const EmbeddingError& e) {
    err << "error: " << e.what() << "\n";
    return kHypothesisFailure;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << " (best estimate " << format_number(e.best_estimate())
        << ", error bound " << format_number(e.error_bound()) << ")\n";
    return kNonConvergence;
  } catch (const ConsistencyError& e) {
    err << "error: internal consistency check failed: " << e.what() << "\n";
    return kNonConvergence;
  }
}

}  // namespace trigzeros::cli
