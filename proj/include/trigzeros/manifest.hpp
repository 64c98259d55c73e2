#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace trigzeros {

inline constexpr const char* kToolVersion = "0.1.0";

/// Provenance record written next to every CLI output.
struct RunManifest {
  std::string command;
  std::string model;
  std::map<std::string, double> params;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> outputs;
  std::string tool_version = kToolVersion;
  std::string timestamp;  ///< ISO-8601, UTC

  std::string to_json() const;
  static RunManifest from_json(const std::string& text);

  friend bool operator==(const RunManifest&, const RunManifest&) = default;
};

/// Current UTC time as YYYY-MM-DDTHH:MM:SSZ.
std::string utc_timestamp();

}  // namespace trigzeros
