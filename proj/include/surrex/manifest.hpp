#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace surrex {

inline constexpr const char* kToolVersion = "0.1.0";

/// Record of one CLI invocation: everything needed to reproduce its outputs
/// byte for byte, including parameter defaults that were filled in at run time
/// and the kernel backend that produced the numbers.
struct RunManifest {
  std::string command;
  nlohmann::ordered_json parameters;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::string tool_version = kToolVersion;
  std::string kernel_backend;
  double duration_seconds = 0.0;
};

nlohmann::ordered_json manifest_to_json(const RunManifest& manifest);
RunManifest manifest_from_json(const nlohmann::ordered_json& j);

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest);
RunManifest read_manifest(const std::filesystem::path& path);

}  // namespace surrex
