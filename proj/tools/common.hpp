#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "surrex/manifest.hpp"

namespace surrex::cli {

/// Collects manifest material while a command runs; finish() stamps the
/// duration and active kernel backend and writes `<primary output>.manifest.json`.
class RunRecorder {
public:
  explicit RunRecorder(std::string command)
      : start_(std::chrono::steady_clock::now()) {
    manifest_.command = std::move(command);
  }

  void set_parameters(nlohmann::ordered_json parameters) {
    manifest_.parameters = std::move(parameters);
  }
  void add_input(const std::string& path) { manifest_.inputs.push_back(path); }
  void add_output(const std::string& path) { manifest_.outputs.push_back(path); }

  /// Writes the manifest next to the primary (first) output.
  std::string finish();

private:
  RunManifest manifest_;
  std::chrono::steady_clock::time_point start_;
};

std::uint64_t default_seed_from_env();

/// Splits "name=value" pairs; errors on malformed entries.
std::vector<std::pair<std::string, std::string>> parse_key_values(
    const std::vector<std::string>& entries, const std::string& flag);

}  // namespace surrex::cli
