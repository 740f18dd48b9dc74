#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "surrex/error.hpp"
#include "surrex/manifest.hpp"
#include "surrex/serialize.hpp"
#include "surrex/tabular.hpp"

using namespace surrex;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
  auto dir = fs::temp_directory_path() / "surrex-serialize-tests";
  fs::create_directories(dir);
  return dir / name;
}

std::vector<std::string> keys_of(const ordered_json& j) {
  std::vector<std::string> out;
  for (auto it = j.begin(); it != j.end(); ++it) out.push_back(it.key());
  return out;
}

}  // namespace

TEST_CASE("shortest double formatting round-trips") {
  for (const double v : {0.5, 0.1, 1.0, -3.25, 1e-17, 6.02e23, 0.0,
                         0.30000000000000004, std::numeric_limits<double>::min()}) {
    const auto text = format_double_shortest(v);
    CHECK(std::stod(text) == v);
  }
  CHECK(format_double_shortest(0.5) == "0.5");
  CHECK(format_double_shortest(-2.0) == "-2");
}

TEST_CASE("explanation json keeps a stable key order") {
  Explanation e;
  e.query = {0.25, -1.5};
  e.method = Method::ls;
  e.surrogate.intercept = 0.4;
  e.surrogate.coefficients = {1.25, -0.5};
  e.surrogate.ridge_lambda = 1e-3;
  e.boundary = BoundaryPoint{{0.3, -1.4}, 0.1118, 4};
  e.n_samples_used = 500;
  e.seed = 9;
  e.r_sx = 0.3;

  const auto j = explanation_to_json(e);
  CHECK(keys_of(j) == std::vector<std::string>{"method", "query", "intercept", "coefficients",
                                               "boundary_point", "boundary_distance", "seed",
                                               "n_samples", "kernel_width", "r_sx",
                                               "ridge_lambda"});
  CHECK(j["method"] == "ls");
  CHECK(j["kernel_width"].is_null());
  CHECK(j["r_sx"] == 0.3);
  CHECK(j["boundary_point"][0] == 0.3);

  Explanation lime = e;
  lime.method = Method::lime;
  lime.boundary.reset();
  lime.r_sx.reset();
  lime.kernel_width = 1.5;
  const auto jl = explanation_to_json(lime);
  CHECK(jl["boundary_point"].is_null());
  CHECK(jl["boundary_distance"].is_null());
  CHECK(jl["kernel_width"] == 1.5);
  CHECK(jl["r_sx"].is_null());
}

TEST_CASE("report json carries skips with reasons") {
  FidelityReport r;
  r.method = Method::lime_k;
  r.r_fid_fraction = 0.05;
  r.n_eval = 100;
  r.mean = 0.9;
  r.std_dev = 0.05;
  r.n_skipped = 1;
  r.per_instance.push_back({0, 0.9, ""});
  r.per_instance.push_back({3, std::nullopt, "one-class neighborhood"});

  const auto j = report_to_json(r);
  CHECK(keys_of(j) == std::vector<std::string>{"method", "r_fid_fraction", "n_eval", "mean",
                                               "std", "n_skipped", "per_instance"});
  CHECK(j["method"] == "lime-k");
  REQUIRE(j["per_instance"].size() == 2);
  CHECK(j["per_instance"][0]["index"] == 0);
  CHECK(j["per_instance"][0]["score"] == 0.9);
  CHECK(j["per_instance"][1]["score"] == "skip");
  CHECK(j["per_instance"][1]["reason"] == "one-class neighborhood");

  FidelityReport empty;
  empty.method = Method::ls;
  empty.r_fid_fraction = 0.05;
  empty.n_eval = 10;
  empty.n_skipped = 2;
  const auto je = report_to_json(empty);
  CHECK(je["mean"].is_null());
  CHECK(je["std"].is_null());
}

TEST_CASE("heatmap csv lists one row per eval instance") {
  Dataset eval(2, {"x0", "x1"});
  eval.add_row(std::vector<double>{1.0, 2.0}, 0);
  eval.add_row(std::vector<double>{3.0, 4.0}, 1);

  FidelityReport r;
  r.per_instance.push_back({0, 0.75, ""});
  r.per_instance.push_back({1, std::nullopt, "skip reason"});

  const auto p = temp_file("heatmap.csv");
  write_heatmap_csv(p, eval, r);
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  CHECK(line == "index,x0,x1,local_fid");
  std::getline(in, line);
  CHECK(line == "0,1,2,0.75");
  std::getline(in, line);
  CHECK(line == "1,3,4,skip");
  CHECK_FALSE(std::getline(in, line));
}

TEST_CASE("json files round-trip and reject junk") {
  const auto p = temp_file("doc.json");
  ordered_json doc;
  doc["b"] = 1;
  doc["a"] = ordered_json::array({1, 2, 3});
  write_json_file(p, doc);
  CHECK(read_json_file(p) == doc);
  CHECK(keys_of(read_json_file(p)) == std::vector<std::string>{"b", "a"});

  const auto bad = temp_file("bad.json");
  std::ofstream(bad) << "{not json";
  try {
    read_json_file(bad);
    FAIL("expected parse error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::parse_error);
  }
}

TEST_CASE("manifests round-trip") {
  RunManifest m;
  m.command = "explain";
  m.parameters["seed"] = 7;
  m.parameters["method"] = "ls";
  m.inputs = {"model.json", "data.csv"};
  m.outputs = {"out.json"};
  m.kernel_backend = "scalar";
  m.duration_seconds = 1.25;

  const auto p = temp_file("run.manifest.json");
  write_manifest(p, m);
  const auto back = read_manifest(p);
  CHECK(back.command == m.command);
  CHECK(back.parameters == m.parameters);
  CHECK(back.inputs == m.inputs);
  CHECK(back.outputs == m.outputs);
  CHECK(back.tool_version == kToolVersion);
  CHECK(back.kernel_backend == "scalar");
  CHECK(back.duration_seconds == 1.25);

  const auto j = manifest_to_json(m);
  CHECK(keys_of(j) == std::vector<std::string>{"command", "parameters", "inputs", "outputs",
                                               "tool_version", "kernel_backend",
                                               "duration_seconds"});
}
