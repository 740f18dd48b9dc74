#include "commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iostream>

#include "common.hpp"
#include "surrex/error.hpp"
#include "surrex/fidelity.hpp"
#include "surrex/forest.hpp"
#include "surrex/rng.hpp"
#include "surrex/sampling.hpp"
#include "surrex/serialize.hpp"
#include "surrex/surrogate.hpp"

namespace surrex::cli {

using rng::derive_seed;
using rng::Stream;
using rng::StreamTag;

namespace {

template <typename T>
T get_field(const ordered_json& j, const char* key) {
  auto it = j.find(key);
  require(it != j.end(), Errc::parse_error, std::string("parameters missing field: ") + key);
  try {
    return it->get<T>();
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::parse_error, std::string("parameters field ") + key + ": " + e.what());
  }
}

template <typename T>
std::optional<T> get_optional(const ordered_json& j, const char* key) {
  auto it = j.find(key);
  require(it != j.end(), Errc::parse_error, std::string("parameters missing field: ") + key);
  if (it->is_null()) return std::nullopt;
  try {
    return it->get<T>();
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::parse_error, std::string("parameters field ") + key + ": " + e.what());
  }
}

template <typename T>
ordered_json json_or_null(const std::optional<T>& v) {
  if (v.has_value()) return ordered_json(*v);
  return ordered_json(nullptr);
}

Method parse_method(const std::string& name) {
  auto method = method_from_name(name);
  require(method.has_value(), Errc::invalid_argument,
          "unknown method: " + name + " (expected lime, lime-k or ls)");
  return *method;
}

Dataset load_for_model(const std::string& path, const std::string& target,
                       const RandomForest& model) {
  Dataset data = load_csv(path, target, /*drop_non_numeric=*/true);
  require(data.dimension() == model.dimension(), Errc::invalid_argument,
          "dataset has " + std::to_string(data.dimension()) + " features but the model expects " +
              std::to_string(model.dimension()));
  return data;
}

ExplainerConfig make_explainer_config(Method method, std::size_t n_samples,
                                      std::optional<double> kernel_width,
                                      std::optional<double> r_sx,
                                      std::optional<double> ridge_lambda, std::uint64_t seed) {
  ExplainerConfig cfg;
  cfg.method = method;
  cfg.n_samples = n_samples;
  cfg.kernel_width = kernel_width;
  cfg.r_sx = r_sx;
  cfg.ridge_lambda = ridge_lambda;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

Dataset select_eval_subset(const Dataset& test, std::size_t cap, std::uint64_t seed) {
  if (cap == 0 || test.n_rows() <= cap) return test;
  std::vector<std::size_t> indices(test.n_rows());
  for (std::size_t i = 0; i < indices.size(); ++i) indices[i] = i;
  Stream stream(derive_seed(seed, StreamTag::selection));
  for (std::size_t i = 0; i < cap; ++i) {
    std::size_t j = i + static_cast<std::size_t>(stream.next_below(indices.size() - i));
    std::swap(indices[i], indices[j]);
  }
  indices.resize(cap);
  std::sort(indices.begin(), indices.end());
  Dataset subset(test.dimension(), test.feature_names());
  subset.reserve(cap);
  for (std::size_t i : indices) subset.add_row(test.row(i), test.label(i));
  return subset;
}

FeatureVector parse_point(const std::string& text) {
  FeatureVector values;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    std::string piece = text.substr(pos, comma == std::string::npos ? comma : comma - pos);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(piece.data(), piece.data() + piece.size(), v);
    require(ec == std::errc() && ptr == piece.data() + piece.size() && std::isfinite(v),
            Errc::invalid_argument, "--point expects comma-separated numbers, got: " + text);
    values.push_back(v);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  require(!values.empty(), Errc::invalid_argument, "--point is empty");
  return values;
}

BenchmarkDataset parse_dataset_spec(const std::string& entry) {
  if (entry == "moons") return {"moons", "", ""};
  auto eq = entry.find('=');
  require(eq != std::string::npos && eq > 0, Errc::invalid_argument,
          "dataset spec must be `moons` or name=path:target, got: " + entry);
  std::string rest = entry.substr(eq + 1);
  auto colon = rest.rfind(':');
  require(colon != std::string::npos && colon > 0 && colon + 1 < rest.size(),
          Errc::invalid_argument,
          "dataset spec must be `moons` or name=path:target, got: " + entry);
  return {entry.substr(0, eq), rest.substr(0, colon), rest.substr(colon + 1)};
}

// ---------------------------------------------------------------------------
// Parameter JSON round-trips

ordered_json to_json(const GenerateParams& p) {
  ordered_json j;
  j["n"] = p.n;
  j["noise"] = p.noise;
  j["seed"] = p.seed;
  j["out"] = p.out;
  return j;
}

GenerateParams generate_params_from_json(const ordered_json& j) {
  GenerateParams p;
  p.n = get_field<std::size_t>(j, "n");
  p.noise = get_field<double>(j, "noise");
  p.seed = get_field<std::uint64_t>(j, "seed");
  p.out = get_field<std::string>(j, "out");
  return p;
}

ordered_json to_json(const PreprocessParams& p) {
  ordered_json j;
  j["input"] = p.input;
  j["target"] = p.target;
  j["out"] = p.out;
  return j;
}

PreprocessParams preprocess_params_from_json(const ordered_json& j) {
  PreprocessParams p;
  p.input = get_field<std::string>(j, "input");
  p.target = get_field<std::string>(j, "target");
  p.out = get_field<std::string>(j, "out");
  return p;
}

ordered_json to_json(const TrainParams& p) {
  ordered_json j;
  j["data"] = p.data;
  j["target"] = p.target;
  j["trees"] = p.trees;
  j["max_depth"] = p.max_depth;
  j["min_samples_leaf"] = p.min_samples_leaf;
  j["features_per_split"] = p.features_per_split;
  j["test_fraction"] = p.test_fraction;
  j["seed"] = p.seed;
  j["out"] = p.out;
  return j;
}

TrainParams train_params_from_json(const ordered_json& j) {
  TrainParams p;
  p.data = get_field<std::string>(j, "data");
  p.target = get_field<std::string>(j, "target");
  p.trees = get_field<std::size_t>(j, "trees");
  p.max_depth = get_field<std::size_t>(j, "max_depth");
  p.min_samples_leaf = get_field<std::size_t>(j, "min_samples_leaf");
  p.features_per_split = get_field<std::size_t>(j, "features_per_split");
  p.test_fraction = get_field<double>(j, "test_fraction");
  p.seed = get_field<std::uint64_t>(j, "seed");
  p.out = get_field<std::string>(j, "out");
  return p;
}

ordered_json to_json(const ExplainParams& p) {
  ordered_json j;
  j["model"] = p.model;
  j["data"] = p.data;
  j["target"] = p.target;
  j["method"] = p.method;
  j["index"] = json_or_null(p.index);
  j["point"] = json_or_null(p.point);
  j["n_samples"] = p.n_samples;
  j["kernel_width"] = json_or_null(p.kernel_width);
  j["r_sx"] = json_or_null(p.r_sx);
  j["ridge_lambda"] = json_or_null(p.ridge_lambda);
  j["gs_n_per_step"] = json_or_null(p.gs_n_per_step);
  j["gs_step"] = json_or_null(p.gs_step);
  j["gs_max_radius"] = json_or_null(p.gs_max_radius);
  j["seed"] = p.seed;
  j["out"] = p.out;
  return j;
}

ExplainParams explain_params_from_json(const ordered_json& j) {
  ExplainParams p;
  p.model = get_field<std::string>(j, "model");
  p.data = get_field<std::string>(j, "data");
  p.target = get_field<std::string>(j, "target");
  p.method = get_field<std::string>(j, "method");
  p.index = get_optional<std::int64_t>(j, "index");
  p.point = get_optional<FeatureVector>(j, "point");
  p.n_samples = get_field<std::size_t>(j, "n_samples");
  p.kernel_width = get_optional<double>(j, "kernel_width");
  p.r_sx = get_optional<double>(j, "r_sx");
  p.ridge_lambda = get_optional<double>(j, "ridge_lambda");
  p.gs_n_per_step = get_optional<std::size_t>(j, "gs_n_per_step");
  p.gs_step = get_optional<double>(j, "gs_step");
  p.gs_max_radius = get_optional<double>(j, "gs_max_radius");
  p.seed = get_field<std::uint64_t>(j, "seed");
  p.out = get_field<std::string>(j, "out");
  return p;
}

ordered_json to_json(const FidelityParams& p) {
  ordered_json j;
  j["model"] = p.model;
  j["data"] = p.data;
  j["target"] = p.target;
  j["method"] = p.method;
  j["n_samples"] = p.n_samples;
  j["kernel_width"] = json_or_null(p.kernel_width);
  j["r_sx"] = json_or_null(p.r_sx);
  j["ridge_lambda"] = json_or_null(p.ridge_lambda);
  j["r_fid"] = p.r_fid;
  j["n_eval"] = p.n_eval;
  j["test_fraction"] = p.test_fraction;
  j["max_eval_instances"] = p.max_eval_instances;
  j["sweep"] = p.sweep;
  j["heatmap"] = p.heatmap;
  j["seed"] = p.seed;
  j["out"] = p.out;
  return j;
}

FidelityParams fidelity_params_from_json(const ordered_json& j) {
  FidelityParams p;
  p.model = get_field<std::string>(j, "model");
  p.data = get_field<std::string>(j, "data");
  p.target = get_field<std::string>(j, "target");
  p.method = get_field<std::string>(j, "method");
  p.n_samples = get_field<std::size_t>(j, "n_samples");
  p.kernel_width = get_optional<double>(j, "kernel_width");
  p.r_sx = get_optional<double>(j, "r_sx");
  p.ridge_lambda = get_optional<double>(j, "ridge_lambda");
  p.r_fid = get_field<double>(j, "r_fid");
  p.n_eval = get_field<std::size_t>(j, "n_eval");
  p.test_fraction = get_field<double>(j, "test_fraction");
  p.max_eval_instances = get_field<std::size_t>(j, "max_eval_instances");
  p.sweep = get_field<std::vector<double>>(j, "sweep");
  p.heatmap = get_field<std::string>(j, "heatmap");
  p.seed = get_field<std::uint64_t>(j, "seed");
  p.out = get_field<std::string>(j, "out");
  return p;
}

ordered_json to_json(const BenchmarkParams& p) {
  ordered_json j;
  ordered_json datasets = ordered_json::array();
  for (const auto& d : p.datasets) {
    ordered_json e;
    e["name"] = d.name;
    e["path"] = d.path;
    e["target"] = d.target;
    datasets.push_back(std::move(e));
  }
  j["datasets"] = std::move(datasets);
  j["out_dir"] = p.out_dir;
  j["seed"] = p.seed;
  j["trees"] = p.trees;
  j["test_fraction"] = p.test_fraction;
  j["moons_n"] = p.moons_n;
  j["moons_noise"] = p.moons_noise;
  j["n_samples"] = p.n_samples;
  j["n_eval"] = p.n_eval;
  j["r_fid"] = p.r_fid;
  j["r_sx"] = p.r_sx;
  j["max_eval_instances"] = p.max_eval_instances;
  ordered_json widths = ordered_json::object();
  for (const auto& [name, width] : p.lime_k_widths) widths[name] = width;
  j["lime_k_widths"] = std::move(widths);
  j["lime_k_grid"] = p.lime_k_grid;
  j["grid_instances"] = p.grid_instances;
  return j;
}

BenchmarkParams benchmark_params_from_json(const ordered_json& j) {
  BenchmarkParams p;
  p.datasets.clear();
  auto datasets = j.find("datasets");
  require(datasets != j.end() && datasets->is_array(), Errc::parse_error,
          "parameters missing field: datasets");
  for (const auto& e : *datasets) {
    BenchmarkDataset d;
    d.name = get_field<std::string>(e, "name");
    d.path = get_field<std::string>(e, "path");
    d.target = get_field<std::string>(e, "target");
    p.datasets.push_back(std::move(d));
  }
  p.out_dir = get_field<std::string>(j, "out_dir");
  p.seed = get_field<std::uint64_t>(j, "seed");
  p.trees = get_field<std::size_t>(j, "trees");
  p.test_fraction = get_field<double>(j, "test_fraction");
  p.moons_n = get_field<std::size_t>(j, "moons_n");
  p.moons_noise = get_field<double>(j, "moons_noise");
  p.n_samples = get_field<std::size_t>(j, "n_samples");
  p.n_eval = get_field<std::size_t>(j, "n_eval");
  p.r_fid = get_field<std::vector<double>>(j, "r_fid");
  p.r_sx = get_field<double>(j, "r_sx");
  p.max_eval_instances = get_field<std::size_t>(j, "max_eval_instances");
  auto widths = j.find("lime_k_widths");
  require(widths != j.end() && widths->is_object(), Errc::parse_error,
          "parameters missing field: lime_k_widths");
  p.lime_k_widths.clear();
  for (auto it = widths->begin(); it != widths->end(); ++it) {
    require(it.value().is_number(), Errc::parse_error, "lime_k_widths values must be numbers");
    p.lime_k_widths.emplace_back(it.key(), it.value().get<double>());
  }
  p.lime_k_grid = get_field<std::vector<double>>(j, "lime_k_grid");
  p.grid_instances = get_field<std::size_t>(j, "grid_instances");
  return p;
}

// ---------------------------------------------------------------------------
// Commands

void run_generate(const GenerateParams& p) {
  require(p.n >= 2, Errc::invalid_argument, "--n must be at least 2");
  require(p.noise >= 0.0 && std::isfinite(p.noise), Errc::invalid_argument,
          "--noise must be finite and non-negative");
  RunRecorder recorder("generate");
  recorder.set_parameters(to_json(p));
  Dataset data = generate_half_moons(p.n, p.noise, p.seed);
  save_csv(data, p.out);
  recorder.add_output(p.out);
  std::string manifest = recorder.finish();
  std::cout << "rows " << data.n_rows() << "\nwrote " << p.out << "\nmanifest " << manifest
            << "\n";
}

void run_preprocess(const PreprocessParams& p) {
  RunRecorder recorder("preprocess");
  recorder.set_parameters(to_json(p));
  recorder.add_input(p.input);
  CsvInfo info;
  Dataset data = load_csv(p.input, p.target, /*drop_non_numeric=*/true, &info);
  save_csv(data, p.out);
  recorder.add_output(p.out);
  std::string manifest = recorder.finish();
  std::cout << "rows " << data.n_rows() << "\nfeatures " << data.dimension() << "\ndropped "
            << info.dropped_columns.size();
  for (const auto& name : info.dropped_columns) std::cout << ' ' << name;
  std::cout << "\nclasses";
  for (std::size_t i = 0; i < info.class_values.size(); ++i)
    std::cout << ' ' << info.class_values[i] << "->" << i;
  std::cout << "\nwrote " << p.out << "\nmanifest " << manifest << "\n";
}

void run_train(const TrainParams& p) {
  require(p.trees >= 1, Errc::invalid_argument, "--trees must be at least 1");
  require(p.test_fraction > 0.0 && p.test_fraction < 1.0, Errc::invalid_argument,
          "--test-fraction must be in (0, 1)");
  RunRecorder recorder("train");
  recorder.set_parameters(to_json(p));
  recorder.add_input(p.data);
  Dataset data = load_csv(p.data, p.target, /*drop_non_numeric=*/true);
  auto [train, test] = train_test_split(data, p.test_fraction, p.seed);
  require(train.has_both_classes(), Errc::invalid_argument,
          "training split is single-class; adjust --test-fraction or --seed");
  RandomForestParams params;
  params.n_trees = p.trees;
  params.max_depth = p.max_depth;
  params.min_samples_leaf = p.min_samples_leaf;
  params.features_per_split = p.features_per_split;
  params.seed = p.seed;
  RandomForest model = train_random_forest(train, params);
  std::vector<double> scores(test.n_rows());
  for (std::size_t i = 0; i < test.n_rows(); ++i) scores[i] = model.score(test.row(i));
  double test_auc = auc(scores, test.labels());
  model.save(p.out);
  recorder.add_output(p.out);
  std::string manifest = recorder.finish();
  std::cout << "n_train " << train.n_rows() << "\nn_test " << test.n_rows() << "\ntest_auc "
            << format_double_shortest(test_auc) << "\nwrote " << p.out << "\nmanifest "
            << manifest << "\n";
}

void run_explain(const ExplainParams& p) {
  require(p.index.has_value() != p.point.has_value(), Errc::invalid_argument,
          "exactly one of --index / --point is required");
  Method method = parse_method(p.method);
  RunRecorder recorder("explain");
  recorder.set_parameters(to_json(p));
  recorder.add_input(p.model);
  recorder.add_input(p.data);
  RandomForest model = RandomForest::load(p.model);
  Dataset data = load_for_model(p.data, p.target, model);
  FeatureVector x;
  if (p.index.has_value()) {
    require(*p.index >= 0 && static_cast<std::size_t>(*p.index) < data.n_rows(),
            Errc::invalid_argument,
            "--index out of range (dataset has " + std::to_string(data.n_rows()) + " rows)");
    x = data.row_copy(static_cast<std::size_t>(*p.index));
  } else {
    x = *p.point;
    require(x.size() == data.dimension(), Errc::invalid_argument,
            "--point has " + std::to_string(x.size()) + " values but the dataset has " +
                std::to_string(data.dimension()) + " features");
  }

  ExplainerConfig cfg = make_explainer_config(method, p.n_samples, p.kernel_width, p.r_sx,
                                              p.ridge_lambda, p.seed);
  Explanation explanation;
  if (method == Method::ls) {
    double data_scale = relative_radius(data, x, 1.0);
    if (p.gs_n_per_step || p.gs_step || p.gs_max_radius) {
      GrowingSpheresConfig gs = default_growing_spheres(
          data_scale, derive_seed(p.seed, StreamTag::explain_boundary));
      if (p.gs_n_per_step) gs.n_per_step = *p.gs_n_per_step;
      if (p.gs_step) {
        gs.initial_radius = *p.gs_step;
        gs.radius_growth = *p.gs_step;
      }
      if (p.gs_max_radius) gs.max_radius = *p.gs_max_radius;
      cfg.growing_spheres = gs;
    }
    explanation = explain_ls(model, x, data_scale, cfg);
  } else {
    explanation = explain_lime(model, x, feature_stats(data), cfg);
  }

  write_json_file(p.out, explanation_to_json(explanation));
  recorder.add_output(p.out);
  std::string manifest = recorder.finish();
  std::cout << "method " << method_name(method) << "\nintercept "
            << format_double_shortest(explanation.surrogate.intercept) << "\ncoefficients";
  for (double c : explanation.surrogate.coefficients) std::cout << ' ' << format_double_shortest(c);
  std::cout << "\nwrote " << p.out << "\nmanifest " << manifest << "\n";
}

void run_fidelity(const FidelityParams& p) {
  Method method = parse_method(p.method);
  require(p.r_fid > 0.0 && p.r_fid <= 1.0, Errc::invalid_argument, "--r-fid must be in (0, 1]");
  require(p.n_eval >= 2, Errc::invalid_argument, "--n-eval must be at least 2");
  require(p.test_fraction > 0.0 && p.test_fraction < 1.0, Errc::invalid_argument,
          "--test-fraction must be in (0, 1)");
  RunRecorder recorder("fidelity");
  recorder.set_parameters(to_json(p));
  recorder.add_input(p.model);
  recorder.add_input(p.data);
  RandomForest model = RandomForest::load(p.model);
  Dataset data = load_for_model(p.data, p.target, model);
  auto [train, test] = train_test_split(data, p.test_fraction, p.seed);
  require(test.n_rows() > 0, Errc::invalid_argument, "test split is empty");
  Dataset eval_set = select_eval_subset(test, p.max_eval_instances, p.seed);

  ExplainerConfig cfg = make_explainer_config(method, p.n_samples, p.kernel_width, p.r_sx,
                                              p.ridge_lambda, p.seed);
  auto explanations = explain_dataset(model, cfg, eval_set, train);

  FidelityConfig fid;
  fid.r_fid_fraction = p.r_fid;
  fid.n_eval = p.n_eval;
  fid.seed = p.seed;
  FidelityReport report = fidelity_over_instances(model, explanations, method, eval_set, train, fid);

  ordered_json out = report_to_json(report);
  if (!p.sweep.empty()) {
    ordered_json sweep = ordered_json::array();
    for (std::size_t i = 0; i < p.sweep.size(); ++i) {
      FidelityConfig sweep_cfg;
      sweep_cfg.r_fid_fraction = p.sweep[i];
      sweep_cfg.n_eval = p.n_eval;
      sweep_cfg.seed = derive_seed(p.seed, StreamTag::sweep, i);
      FidelityReport r =
          fidelity_over_instances(model, explanations, method, eval_set, train, sweep_cfg);
      ordered_json e;
      e["r_fid"] = r.r_fid_fraction;
      e["mean"] = json_or_null(r.mean);
      e["std"] = json_or_null(r.std_dev);
      e["n_skipped"] = r.n_skipped;
      sweep.push_back(std::move(e));
    }
    out["sweep"] = std::move(sweep);
  }
  write_json_file(p.out, out);
  recorder.add_output(p.out);
  if (!p.heatmap.empty()) {
    write_heatmap_csv(p.heatmap, eval_set, report);
    recorder.add_output(p.heatmap);
  }
  std::string manifest = recorder.finish();
  std::cout << "n_eval_instances " << eval_set.n_rows() << "\nmean "
            << (report.mean ? format_double_shortest(*report.mean) : "n/a") << "\nstd "
            << (report.std_dev ? format_double_shortest(*report.std_dev) : "n/a") << "\nskipped "
            << report.n_skipped << "\nwrote " << p.out << "\nmanifest " << manifest << "\n";
}

}  // namespace surrex::cli
