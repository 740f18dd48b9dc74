#include "common.hpp"

#include <cstdlib>

#include "surrex/error.hpp"
#include "surrex/kernels.hpp"

namespace surrex::cli {

std::string RunRecorder::finish() {
  auto elapsed = std::chrono::steady_clock::now() - start_;
  manifest_.duration_seconds = std::chrono::duration<double>(elapsed).count();
  manifest_.kernel_backend = kern::backend_name(kern::active_backend());
  require(!manifest_.outputs.empty(), Errc::invalid_argument,
          "run produced no outputs to anchor a manifest to");
  std::string path = manifest_.outputs.front() + ".manifest.json";
  write_manifest(path, manifest_);
  return path;
}

std::uint64_t default_seed_from_env() {
  if (const char* env = std::getenv("SURREX_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      fail(Errc::invalid_argument, std::string("SURREX_SEED is not an integer: ") + env);
    }
  }
  return 1;
}

std::vector<std::pair<std::string, std::string>> parse_key_values(
    const std::vector<std::string>& entries, const std::string& flag) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& entry : entries) {
    auto eq = entry.find('=');
    require(eq != std::string::npos && eq > 0 && eq + 1 < entry.size(), Errc::invalid_argument,
            flag + " expects name=value, got: " + entry);
    out.emplace_back(entry.substr(0, eq), entry.substr(eq + 1));
  }
  return out;
}

}  // namespace surrex::cli
