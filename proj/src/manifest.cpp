#include "surrex/manifest.hpp"

#include "surrex/error.hpp"
#include "surrex/serialize.hpp"

namespace surrex {

nlohmann::ordered_json manifest_to_json(const RunManifest& manifest) {
  nlohmann::ordered_json j;
  j["command"] = manifest.command;
  j["parameters"] = manifest.parameters;
  j["inputs"] = manifest.inputs;
  j["outputs"] = manifest.outputs;
  j["tool_version"] = manifest.tool_version;
  j["kernel_backend"] = manifest.kernel_backend;
  j["duration_seconds"] = manifest.duration_seconds;
  return j;
}

namespace {

template <typename T>
T field(const nlohmann::ordered_json& j, const char* key) {
  auto it = j.find(key);
  require(it != j.end(), Errc::parse_error,
          std::string("manifest missing field: ") + key);
  try {
    return it->get<T>();
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::parse_error, std::string("manifest field ") + key + ": " + e.what());
  }
}

}  // namespace

RunManifest manifest_from_json(const nlohmann::ordered_json& j) {
  RunManifest m;
  m.command = field<std::string>(j, "command");
  auto params = j.find("parameters");
  require(params != j.end() && params->is_object(), Errc::parse_error,
          "manifest missing field: parameters");
  m.parameters = *params;
  m.inputs = field<std::vector<std::string>>(j, "inputs");
  m.outputs = field<std::vector<std::string>>(j, "outputs");
  m.tool_version = field<std::string>(j, "tool_version");
  m.kernel_backend = field<std::string>(j, "kernel_backend");
  m.duration_seconds = field<double>(j, "duration_seconds");
  return m;
}

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest) {
  write_json_file(path, manifest_to_json(manifest));
}

RunManifest read_manifest(const std::filesystem::path& path) {
  return manifest_from_json(read_json_file(path));
}

}  // namespace surrex
