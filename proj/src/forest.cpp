#include "surrex/forest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "surrex/error.hpp"
#include "surrex/rng.hpp"

namespace surrex {

namespace {

using Node = RandomForest::Node;
using Tree = RandomForest::Tree;

struct TreeBuilder {
  const Dataset& data;
  const RandomForestParams& params;
  rng::Stream stream;
  std::vector<Node> nodes;
  std::vector<std::size_t> feature_pool;

  TreeBuilder(const Dataset& data_, const RandomForestParams& params_, std::uint64_t seed)
      : data(data_), params(params_), stream(seed), feature_pool(data_.dimension()) {
    std::iota(feature_pool.begin(), feature_pool.end(), std::size_t{0});
  }

  std::size_t features_per_split() const {
    if (params.features_per_split > 0)
      return std::min(params.features_per_split, data.dimension());
    const auto k = static_cast<std::size_t>(
        std::floor(std::sqrt(static_cast<double>(data.dimension()))));
    return std::max<std::size_t>(1, k);
  }

  static double gini(std::size_t c0, std::size_t c1) {
    const double total = static_cast<double>(c0 + c1);
    if (total == 0.0) return 0.0;
    const double p0 = static_cast<double>(c0) / total;
    const double p1 = static_cast<double>(c1) / total;
    return 1.0 - p0 * p0 - p1 * p1;
  }

  // indices may repeat (bootstrap). Returns the node id.
  std::int32_t build(std::vector<std::size_t>& indices, std::size_t depth) {
    const std::size_t n = indices.size();
    std::size_t count1 = 0;
    for (std::size_t idx : indices) count1 += static_cast<std::size_t>(data.label(idx));
    const std::size_t count0 = n - count1;

    const bool pure = count0 == 0 || count1 == 0;
    const bool depth_capped = params.max_depth > 0 && depth >= params.max_depth;
    const bool too_small = n < 2 * params.min_samples_leaf;
    if (pure || depth_capped || too_small) return make_leaf(count0, count1);

    // candidate features: partial Fisher-Yates over the pool
    const std::size_t k = features_per_split();
    for (std::size_t j = 0; j < k; ++j) {
      const std::size_t pick = j + stream.next_below(feature_pool.size() - j);
      std::swap(feature_pool[j], feature_pool[pick]);
    }

    const double parent_impurity = gini(count0, count1);
    double best_decrease = 0.0;
    std::size_t best_feature = 0;
    double best_threshold = 0.0;
    bool found = false;

    std::vector<std::pair<double, int>> sorted(n);
    for (std::size_t fj = 0; fj < k; ++fj) {
      const std::size_t feature = feature_pool[fj];
      for (std::size_t i = 0; i < n; ++i)
        sorted[i] = {data.row(indices[i])[feature], data.label(indices[i])};
      std::sort(sorted.begin(), sorted.end());
      if (sorted.front().first == sorted.back().first) continue;  // constant feature

      std::size_t left1 = 0;
      for (std::size_t i = 0; i + 1 < n; ++i) {
        left1 += static_cast<std::size_t>(sorted[i].second);
        if (sorted[i].first == sorted[i + 1].first) continue;
        const std::size_t nl = i + 1;
        const std::size_t nr = n - nl;
        if (nl < params.min_samples_leaf || nr < params.min_samples_leaf) continue;
        const std::size_t l1 = left1;
        const std::size_t l0 = nl - l1;
        const std::size_t r1 = count1 - l1;
        const std::size_t r0 = nr - r1;
        const double weighted = (static_cast<double>(nl) * gini(l0, l1) +
                                 static_cast<double>(nr) * gini(r0, r1)) /
                                static_cast<double>(n);
        const double decrease = parent_impurity - weighted;
        if (decrease > best_decrease + 1e-15) {
          best_decrease = decrease;
          best_feature = feature;
          best_threshold = 0.5 * (sorted[i].first + sorted[i + 1].first);
          found = true;
        }
      }
    }
    if (!found) return make_leaf(count0, count1);

    std::vector<std::size_t> left_idx, right_idx;
    left_idx.reserve(n);
    right_idx.reserve(n);
    for (std::size_t idx : indices) {
      if (data.row(idx)[best_feature] <= best_threshold)
        left_idx.push_back(idx);
      else
        right_idx.push_back(idx);
    }
    indices.clear();
    indices.shrink_to_fit();

    const auto id = static_cast<std::int32_t>(nodes.size());
    nodes.emplace_back();
    nodes[id].feature = static_cast<std::int32_t>(best_feature);
    nodes[id].threshold = best_threshold;
    const std::int32_t left = build(left_idx, depth + 1);
    nodes[id].left = left;
    const std::int32_t right = build(right_idx, depth + 1);
    nodes[id].right = right;
    return id;
  }

  std::int32_t make_leaf(std::size_t count0, std::size_t count1) {
    const auto id = static_cast<std::int32_t>(nodes.size());
    nodes.emplace_back();
    nodes[id].leaf_label = count1 >= count0 ? 1 : 0;  // tie -> class 1
    return id;
  }
};

}  // namespace

int RandomForest::Tree::predict(std::span<const double> x) const {
  std::int32_t node = 0;
  while (nodes[node].feature >= 0) {
    node = x[nodes[node].feature] <= nodes[node].threshold ? nodes[node].left
                                                           : nodes[node].right;
  }
  return nodes[node].leaf_label;
}

double RandomForest::score(std::span<const double> x) const {
  require(x.size() == dimension_, Errc::invalid_argument,
          "dimension mismatch: model expects " + std::to_string(dimension_) + ", got " +
              std::to_string(x.size()));
  std::size_t votes = 0;
  for (const auto& tree : trees_) votes += static_cast<std::size_t>(tree.predict(x));
  return static_cast<double>(votes) / static_cast<double>(trees_.size());
}

RandomForest train_random_forest(const Dataset& train, const RandomForestParams& params) {
  require(params.n_trees >= 1, Errc::invalid_argument, "n_trees must be >= 1");
  require(train.n_rows() >= 2, Errc::invalid_argument, "training set needs at least 2 rows");
  require(train.has_both_classes(), Errc::invalid_argument,
          "training set must contain both classes");

  RandomForest forest;
  forest.dimension_ = train.dimension();
  forest.params_ = params;
  forest.trees_.resize(params.n_trees);

  const std::size_t n = train.n_rows();
  for (std::size_t t = 0; t < params.n_trees; ++t) {
    const std::uint64_t tree_seed = rng::derive_seed(params.seed, rng::StreamTag::forest_tree, t);
    TreeBuilder builder(train, params, tree_seed);
    std::vector<std::size_t> bootstrap(n);
    for (std::size_t i = 0; i < n; ++i) bootstrap[i] = builder.stream.next_below(n);
    builder.build(bootstrap, 0);
    forest.trees_[t].nodes = std::move(builder.nodes);
  }
  return forest;
}

nlohmann::ordered_json RandomForest::to_json() const {
  nlohmann::ordered_json j;
  j["format"] = "surrex-forest";
  j["version"] = 1;
  j["dimension"] = dimension_;
  j["n_trees"] = trees_.size();
  j["params"] = {{"n_trees", params_.n_trees},
                 {"max_depth", params_.max_depth},
                 {"min_samples_leaf", params_.min_samples_leaf},
                 {"features_per_split", params_.features_per_split},
                 {"seed", params_.seed}};
  nlohmann::ordered_json trees = nlohmann::ordered_json::array();
  for (const auto& tree : trees_) {
    auto feature = nlohmann::ordered_json::array();
    auto threshold = nlohmann::ordered_json::array();
    auto left = nlohmann::ordered_json::array();
    auto right = nlohmann::ordered_json::array();
    auto leaf = nlohmann::ordered_json::array();
    for (const auto& node : tree.nodes) {
      feature.push_back(node.feature);
      threshold.push_back(node.threshold);
      left.push_back(node.left);
      right.push_back(node.right);
      leaf.push_back(node.leaf_label);
    }
    nlohmann::ordered_json node_obj;
    node_obj["feature"] = std::move(feature);
    node_obj["threshold"] = std::move(threshold);
    node_obj["left"] = std::move(left);
    node_obj["right"] = std::move(right);
    node_obj["leaf"] = std::move(leaf);
    trees.push_back(std::move(node_obj));
  }
  j["trees"] = std::move(trees);
  return j;
}

RandomForest RandomForest::from_json(const nlohmann::ordered_json& j) {
  require(j.value("format", "") == "surrex-forest", Errc::parse_error,
          "not a surrex forest file");
  require(j.value("version", 0) == 1, Errc::parse_error, "unsupported forest format version");
  RandomForest forest;
  forest.dimension_ = j.at("dimension").get<std::size_t>();
  const auto& p = j.at("params");
  forest.params_.n_trees = p.at("n_trees").get<std::size_t>();
  forest.params_.max_depth = p.at("max_depth").get<std::size_t>();
  forest.params_.min_samples_leaf = p.at("min_samples_leaf").get<std::size_t>();
  forest.params_.features_per_split = p.at("features_per_split").get<std::size_t>();
  forest.params_.seed = p.at("seed").get<std::uint64_t>();
  for (const auto& tree_json : j.at("trees")) {
    Tree tree;
    const auto& feature = tree_json.at("feature");
    const auto& threshold = tree_json.at("threshold");
    const auto& left = tree_json.at("left");
    const auto& right = tree_json.at("right");
    const auto& leaf = tree_json.at("leaf");
    const std::size_t count = feature.size();
    require(threshold.size() == count && left.size() == count && right.size() == count &&
                leaf.size() == count,
            Errc::parse_error, "inconsistent tree arrays");
    tree.nodes.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
      tree.nodes[i].feature = feature[i].get<std::int32_t>();
      tree.nodes[i].threshold = threshold[i].get<double>();
      tree.nodes[i].left = left[i].get<std::int32_t>();
      tree.nodes[i].right = right[i].get<std::int32_t>();
      tree.nodes[i].leaf_label = leaf[i].get<std::int32_t>();
    }
    forest.trees_.push_back(std::move(tree));
  }
  require(!forest.trees_.empty(), Errc::parse_error, "forest file holds no trees");
  return forest;
}

void RandomForest::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::io_error, "cannot write file: " + path.string());
  out << to_json().dump(1, '\t') << '\n';
  if (!out) fail(Errc::io_error, "write failed: " + path.string());
}

RandomForest RandomForest::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::io_error, "cannot open file: " + path.string());
  nlohmann::ordered_json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::parse_error, "invalid model file " + path.string() + ": " + e.what());
  }
  return from_json(j);
}

}  // namespace surrex
