#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "trigzeros/correlation.hpp"
#include "trigzeros/kacrice.hpp"

namespace trigzeros::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsageError = 1,
  kHypothesisFailure = 2,
  kNonConvergence = 3,
};

/// Runs the command line `args` (without the program name). Data goes to
/// `out` unless --out names a file; the run manifest goes next to that file
/// or, without one, to `err` together with diagnostics.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Thrown for malformed arguments that the option parser cannot see.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// "kind" or "kind:name=value,name=value"; `params` holds further
/// "name=value" pairs or a JSON object and wins on conflicts.
ModelConfig parse_model_spec(const std::string& spec, const std::string& params = "");

/// A real number or a sum of terms such as "2pi", "pi/2", "2*pi-0.3".
double parse_angle(const std::string& text);

/// "lo:hi" with both ends parsed by parse_angle.
Interval parse_interval(const std::string& text);

/// 17 significant digits in the shortest of fixed or scientific notation,
/// independent of the locale.
std::string format_number(double value);

/// Appends the flags of a JSON config object that `args` does not already set.
std::vector<std::string> merge_config(const std::vector<std::string>& args,
                                      const std::string& config_json);

}  // namespace trigzeros::cli
