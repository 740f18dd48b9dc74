#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"
#include "common.hpp"
#include "surrex/error.hpp"
#include "surrex/manifest.hpp"

namespace {

using surrex::Errc;

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::invalid_argument:
      return 2;
    case Errc::io_error:
    case Errc::parse_error:
    case Errc::multiclass_unsupported:
    case Errc::no_features:
      return 3;
    default:
      return 4;  // numerical / skip-dominated failures
  }
}

// CLI11 binds optional flags to sentinel-free holders via std::optional.
template <typename T>
void add_optional(CLI::App* cmd, const std::string& flag, std::optional<T>& target,
                  const std::string& help) {
  cmd->add_option_function<T>(
         flag, [&target](const T& v) { target = v; }, help)
      ->expected(1);
}

}  // namespace

int main(int argc, char** argv) {
  using namespace surrex::cli;

  CLI::App app{"local-surrogate explanation toolkit"};
  app.require_subcommand(1);
  std::uint64_t env_seed = 1;
  try {
    env_seed = default_seed_from_env();
  } catch (const surrex::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  GenerateParams gen;
  gen.seed = env_seed;
  auto* cmd_gen = app.add_subcommand("generate", "write a half-moons CSV");
  cmd_gen->add_option("--n", gen.n, "number of rows")->capture_default_str();
  cmd_gen->add_option("--noise", gen.noise, "gaussian coordinate noise")->capture_default_str();
  cmd_gen->add_option("--seed", gen.seed, "RNG seed")->capture_default_str();
  cmd_gen->add_option("--out", gen.out, "output CSV path")->required();

  PreprocessParams prep;
  auto* cmd_prep = app.add_subcommand("preprocess", "keep numeric columns, map the target to 0/1");
  cmd_prep->add_option("--input", prep.input, "input CSV path")->required();
  cmd_prep->add_option("--target", prep.target, "target column name")->required();
  cmd_prep->add_option("--out", prep.out, "output CSV path")->required();

  TrainParams train;
  train.seed = env_seed;
  auto* cmd_train = app.add_subcommand("train", "train a random forest, print held-out AUC");
  cmd_train->add_option("--data", train.data, "labeled CSV path")->required();
  cmd_train->add_option("--target", train.target, "target column name")->capture_default_str();
  cmd_train->add_option("--trees", train.trees, "number of trees")->capture_default_str();
  cmd_train->add_option("--max-depth", train.max_depth, "depth cap, 0 = unlimited")
      ->capture_default_str();
  cmd_train->add_option("--min-samples-leaf", train.min_samples_leaf, "minimum rows per leaf")
      ->capture_default_str();
  cmd_train
      ->add_option("--features-per-split", train.features_per_split,
                   "features tried per split, 0 = floor(sqrt(d))")
      ->capture_default_str();
  cmd_train->add_option("--test-fraction", train.test_fraction, "held-out fraction")
      ->capture_default_str();
  cmd_train->add_option("--seed", train.seed, "RNG seed")->capture_default_str();
  cmd_train->add_option("--out", train.out, "model output path")->required();

  ExplainParams explain;
  explain.seed = env_seed;
  std::string explain_point_text;
  auto* cmd_explain = app.add_subcommand("explain", "fit a local surrogate at one instance");
  cmd_explain->add_option("--model", explain.model, "model path")->required();
  cmd_explain->add_option("--data", explain.data, "reference CSV path")->required();
  cmd_explain->add_option("--target", explain.target, "target column name")
      ->capture_default_str();
  cmd_explain->add_option("--method", explain.method, "lime, lime-k or ls")->required();
  add_optional<std::int64_t>(cmd_explain, "--index", explain.index,
                             "row to explain (0-based, into --data)");
  cmd_explain->add_option("--point", explain_point_text, "explicit point: v1,v2,...");
  cmd_explain->add_option("--n-samples", explain.n_samples, "surrogate training samples")
      ->capture_default_str();
  add_optional<double>(cmd_explain, "--kernel-width", explain.kernel_width,
                       "RBF width (default 0.75*sqrt(d))");
  add_optional<double>(cmd_explain, "--r-sx", explain.r_sx,
                       "sampling-ball radius fraction (default 0.3)");
  add_optional<double>(cmd_explain, "--ridge-lambda", explain.ridge_lambda,
                       "ridge penalty (default 1.0 lime, 0.001 ls)");
  add_optional<std::size_t>(cmd_explain, "--gs-n-per-step", explain.gs_n_per_step,
                            "boundary-search draws per step");
  add_optional<double>(cmd_explain, "--gs-step", explain.gs_step,
                       "boundary-search initial radius and growth step");
  add_optional<double>(cmd_explain, "--gs-max-radius", explain.gs_max_radius,
                       "boundary-search radius cap");
  cmd_explain->add_option("--seed", explain.seed, "RNG seed")->capture_default_str();
  cmd_explain->add_option("--out", explain.out, "explanation JSON path")->required();

  FidelityParams fidelity;
  fidelity.seed = env_seed;
  auto* cmd_fid = app.add_subcommand("fidelity", "local fidelity over the test split");
  cmd_fid->add_option("--model", fidelity.model, "model path")->required();
  cmd_fid->add_option("--data", fidelity.data, "labeled CSV path")->required();
  cmd_fid->add_option("--target", fidelity.target, "target column name")->capture_default_str();
  cmd_fid->add_option("--method", fidelity.method, "lime, lime-k or ls")->required();
  cmd_fid->add_option("--n-samples", fidelity.n_samples, "surrogate training samples")
      ->capture_default_str();
  add_optional<double>(cmd_fid, "--kernel-width", fidelity.kernel_width,
                       "RBF width (default 0.75*sqrt(d))");
  add_optional<double>(cmd_fid, "--r-sx", fidelity.r_sx,
                       "sampling-ball radius fraction (default 0.3)");
  add_optional<double>(cmd_fid, "--ridge-lambda", fidelity.ridge_lambda,
                       "ridge penalty (default 1.0 lime, 0.001 ls)");
  cmd_fid->add_option("--r-fid", fidelity.r_fid, "evaluation-ball radius fraction")
      ->capture_default_str();
  cmd_fid->add_option("--n-eval", fidelity.n_eval, "evaluation draws per instance")
      ->capture_default_str();
  cmd_fid->add_option("--test-fraction", fidelity.test_fraction, "held-out fraction")
      ->capture_default_str();
  cmd_fid
      ->add_option("--max-eval-instances", fidelity.max_eval_instances,
                   "cap on evaluated instances, 0 = all")
      ->capture_default_str();
  cmd_fid->add_option("--sweep", fidelity.sweep, "extra radius fractions to evaluate")
      ->delimiter(',');
  cmd_fid->add_option("--heatmap", fidelity.heatmap, "per-instance CSV path");
  cmd_fid->add_option("--seed", fidelity.seed, "RNG seed")->capture_default_str();
  cmd_fid->add_option("--out", fidelity.out, "report JSON path")->required();

  BenchmarkParams bench;
  bench.seed = env_seed;
  std::vector<std::string> bench_datasets = {"moons"};
  std::vector<std::string> bench_widths = {"moons=0.5"};
  auto* cmd_bench = app.add_subcommand("benchmark", "comparison table over datasets");
  cmd_bench
      ->add_option("--datasets", bench_datasets,
                   "`moons` or name=path:target entries (comma separated)")
      ->delimiter(',')
      ->capture_default_str();
  cmd_bench->add_option("--out-dir", bench.out_dir, "output directory")->capture_default_str();
  cmd_bench->add_option("--seed", bench.seed, "RNG seed")->capture_default_str();
  cmd_bench->add_option("--trees", bench.trees, "forest size")->capture_default_str();
  cmd_bench->add_option("--test-fraction", bench.test_fraction, "held-out fraction")
      ->capture_default_str();
  cmd_bench->add_option("--moons-n", bench.moons_n, "rows for the built-in dataset")
      ->capture_default_str();
  cmd_bench->add_option("--moons-noise", bench.moons_noise, "noise for the built-in dataset")
      ->capture_default_str();
  cmd_bench->add_option("--n-samples", bench.n_samples, "surrogate training samples")
      ->capture_default_str();
  cmd_bench->add_option("--n-eval", bench.n_eval, "evaluation draws per instance")
      ->capture_default_str();
  cmd_bench->add_option("--r-fid", bench.r_fid, "evaluation radius fractions")
      ->delimiter(',')
      ->capture_default_str();
  cmd_bench->add_option("--r-sx", bench.r_sx, "sampling-ball radius fraction")
      ->capture_default_str();
  cmd_bench
      ->add_option("--max-eval-instances", bench.max_eval_instances,
                   "cap on evaluated instances per dataset, 0 = all")
      ->capture_default_str();
  cmd_bench
      ->add_option("--lime-k-width", bench_widths,
                   "per-dataset kernel width entries name=width; unlisted datasets grid-search")
      ->delimiter(',')
      ->capture_default_str();
  cmd_bench
      ->add_option("--lime-k-grid", bench.lime_k_grid,
                   "grid-search width candidates, in multiples of sqrt(d)")
      ->delimiter(',')
      ->capture_default_str();
  cmd_bench
      ->add_option("--grid-instances", bench.grid_instances,
                   "training instances scored per grid candidate")
      ->capture_default_str();

  RerunParams rerun;
  auto* cmd_rerun = app.add_subcommand("rerun", "replay a recorded run from its manifest");
  cmd_rerun->add_option("--manifest", rerun.manifest, "manifest JSON path")->required();
  cmd_rerun->add_option("--out-dir", rerun.out_dir, "redirect outputs into this directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);  // prints help / error text
    return code == 0 ? 0 : 2;
  }

  try {
    if (cmd_gen->parsed()) {
      run_generate(gen);
    } else if (cmd_prep->parsed()) {
      run_preprocess(prep);
    } else if (cmd_train->parsed()) {
      run_train(train);
    } else if (cmd_explain->parsed()) {
      if (!explain_point_text.empty()) explain.point = parse_point(explain_point_text);
      run_explain(explain);
    } else if (cmd_fid->parsed()) {
      run_fidelity(fidelity);
    } else if (cmd_bench->parsed()) {
      bench.datasets.clear();
      for (const auto& entry : bench_datasets)
        bench.datasets.push_back(parse_dataset_spec(entry));
      bench.lime_k_widths.clear();
      for (const auto& [name, value] : parse_key_values(bench_widths, "--lime-k-width")) {
        try {
          bench.lime_k_widths.emplace_back(name, std::stod(value));
        } catch (const std::exception&) {
          surrex::fail(Errc::invalid_argument, "--lime-k-width value is not a number: " + value);
        }
      }
      return run_benchmark(bench);
    } else if (cmd_rerun->parsed()) {
      return run_rerun(rerun);
    }
  } catch (const surrex::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
