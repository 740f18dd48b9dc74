#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

using ordered_json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

const char* kCli = SURREX_CLI_PATH;

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr
};

fs::path work_dir() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("surrex-cli-tests-" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

RunResult run_cli(const std::string& args) {
  const std::string cmd =
      "cd " + work_dir().string() + " && " + std::string(kCli) + " " + args + " 2>&1";
  RunResult res;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) res.output.append(buf, got);
  const int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

std::string slurp(const std::string& name) {
  std::ifstream in(work_dir() / name, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

ordered_json load_json(const std::string& name) {
  return ordered_json::parse(slurp(name));
}

}  // namespace

TEST_CASE("generate: writes a deterministic csv with a manifest") {
  auto first = run_cli("generate --n 60 --noise 0.3 --seed 5 --out gen1.csv");
  CHECK(first.exit_code == 0);
  auto second = run_cli("generate --n 60 --noise 0.3 --seed 5 --out gen2.csv");
  CHECK(second.exit_code == 0);
  CHECK(slurp("gen1.csv") == slurp("gen2.csv"));
  CHECK_FALSE(slurp("gen1.csv").empty());

  const auto manifest = load_json("gen1.csv.manifest.json");
  CHECK(manifest["command"] == "generate");
  CHECK(manifest["parameters"]["n"] == 60);
  CHECK(manifest["parameters"]["seed"] == 5);
  CHECK(manifest["outputs"][0] == "gen1.csv");
}

TEST_CASE("generate: rejects degenerate sizes with the usage exit code") {
  CHECK(run_cli("generate --n 0 --out bad.csv").exit_code == 2);
  CHECK(run_cli("generate --noise -1 --n 10 --out bad.csv").exit_code == 2);
  CHECK(run_cli("nonsense-command").exit_code == 2);
}

TEST_CASE("train: prints the held-out auc and writes a loadable model") {
  REQUIRE(run_cli("generate --n 300 --noise 0.3 --seed 1 --out moons.csv").exit_code == 0);
  const auto res = run_cli(
      "train --data moons.csv --trees 30 --seed 1 --out model.json");
  CHECK(res.exit_code == 0);
  const auto pos = res.output.find("test_auc ");
  REQUIRE(pos != std::string::npos);
  const double auc = std::stod(res.output.substr(pos + 9));
  CHECK(auc >= 0.85);
  CHECK(auc <= 1.0);

  const auto model = load_json("model.json");
  CHECK(model["format"] == "surrex-forest");
  CHECK(model["trees"].size() == 30);
}

TEST_CASE("train: missing data maps to the data exit code") {
  CHECK(run_cli("train --data nope.csv --out m.json").exit_code == 3);
  CHECK(run_cli("train --data moons.csv --trees 0 --out m.json").exit_code == 2);
}

TEST_CASE("explain: lime records the default width on a 2-d model") {
  const auto res = run_cli(
      "explain --model model.json --data moons.csv --method lime --index 3 --n-samples 800 "
      "--seed 4 --out lime.json");
  CHECK(res.exit_code == 0);
  const auto j = load_json("lime.json");
  CHECK(j["method"] == "lime");
  CHECK(j["kernel_width"].get<double>() == doctest::Approx(1.0606601717798212));
  CHECK(j["boundary_point"].is_null());
  CHECK(j["coefficients"].size() == 2);
  CHECK(j["n_samples"] == 800);
}

TEST_CASE("explain: ls carries a boundary point and reruns byte-identically") {
  const std::string cmd =
      "explain --model model.json --data moons.csv --method ls --r-sx 0.3 --index 3 "
      "--n-samples 800 --seed 4 --out ls.json";
  CHECK(run_cli(cmd).exit_code == 0);
  const auto j = load_json("ls.json");
  CHECK(j["method"] == "ls");
  REQUIRE(j["boundary_point"].is_array());
  CHECK(j["boundary_point"].size() == 2);
  CHECK(j["boundary_distance"].get<double>() > 0.0);
  CHECK(j["kernel_width"].is_null());
  CHECK(j["r_sx"].get<double>() == 0.3);

  const auto bytes = slurp("ls.json");
  CHECK(run_cli(cmd).exit_code == 0);
  CHECK(slurp("ls.json") == bytes);
}

TEST_CASE("explain: flag and method validation") {
  CHECK(run_cli("explain --model model.json --data moons.csv --method gradient --index 1 "
                "--out x.json")
            .exit_code == 2);
  CHECK(run_cli("explain --model model.json --data moons.csv --method lime --out x.json")
            .exit_code == 2);  // neither --index nor --point
  CHECK(run_cli("explain --model model.json --data moons.csv --method lime --index 1 "
                "--point 0.1,0.2 --out x.json")
            .exit_code == 2);  // both
  CHECK(run_cli("explain --model model.json --data moons.csv --method lime --index 100000 "
                "--out x.json")
            .exit_code == 2);
}

TEST_CASE("explain: an unreachable boundary maps to the numerical exit code") {
  const auto res = run_cli(
      "explain --model model.json --data moons.csv --method ls --index 3 --n-samples 400 "
      "--gs-step 1e-8 --gs-max-radius 1e-6 --gs-n-per-step 50 --seed 4 --out never.json");
  CHECK(res.exit_code == 4);
}

TEST_CASE("fidelity: emits a report plus heatmap and honors the sweep flag") {
  const auto res = run_cli(
      "fidelity --model model.json --data moons.csv --method lime --n-samples 400 "
      "--r-fid 0.2 --n-eval 200 --max-eval-instances 12 --sweep 0.3,0.8 --seed 2 "
      "--heatmap heat.csv --out fid.json");
  CHECK(res.exit_code == 0);
  const auto j = load_json("fid.json");
  CHECK(j["method"] == "lime");
  CHECK(j["r_fid_fraction"] == 0.2);
  CHECK(j["per_instance"].size() == 12);
  REQUIRE(j["sweep"].size() == 2);
  CHECK(j["sweep"][0]["r_fid"] == 0.3);
  CHECK(j["sweep"][1]["r_fid"] == 0.8);

  std::istringstream heat(slurp("heat.csv"));
  std::string line;
  std::getline(heat, line);
  CHECK(line == "index,x0,x1,local_fid");
  std::size_t rows = 0;
  while (std::getline(heat, line)) ++rows;
  CHECK(rows == 12);
}

TEST_CASE("rerun: replays a manifest into identical bytes") {
  fs::create_directories(work_dir() / "replay");
  const auto res = run_cli("rerun --manifest ls.json.manifest.json --out-dir replay");
  CHECK(res.exit_code == 0);
  CHECK(slurp("replay/ls.json") == slurp("ls.json"));
}

TEST_CASE("kernel backend override is recorded in the manifest") {
  const auto res = run_cli(
      "generate --n 20 --noise 0.1 --seed 2 --out scalar.csv");
  CHECK(res.exit_code == 0);
  RunResult forced;
  {
    const std::string cmd = "cd " + work_dir().string() + " && SURREX_KERNELS=scalar " +
                            std::string(kCli) +
                            " generate --n 20 --noise 0.1 --seed 2 --out forced.csv 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) forced.output.append(buf, got);
    forced.exit_code = WEXITSTATUS(pclose(pipe));
  }
  CHECK(forced.exit_code == 0);
  CHECK(load_json("forced.csv.manifest.json")["kernel_backend"] == "scalar");
  CHECK(slurp("forced.csv") == slurp("scalar.csv"));  // backend cannot change the data
}
