#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include <json.hpp>

#include "surrex/blackbox.hpp"
#include "surrex/tabular.hpp"

namespace surrex {

struct RandomForestParams {
  std::size_t n_trees = 200;
  std::size_t max_depth = 0;           // 0 = unlimited
  std::size_t min_samples_leaf = 1;
  std::size_t features_per_split = 0;  // 0 = floor(sqrt(d)), at least 1
  std::uint64_t seed = 0;
};

/// Bagged ensemble of CART-style trees: Gini impurity, bootstrap resampling,
/// random feature subset per split. score(x) is the fraction of trees voting
/// class 1, so it always lies on the grid {k / n_trees}.
class RandomForest final : public BlackBoxModel {
public:
  std::size_t dimension() const override { return dimension_; }
  double score(std::span<const double> x) const override;

  const RandomForestParams& params() const { return params_; }
  std::size_t n_trees() const { return trees_.size(); }

  nlohmann::ordered_json to_json() const;
  static RandomForest from_json(const nlohmann::ordered_json& j);
  void save(const std::filesystem::path& path) const;
  static RandomForest load(const std::filesystem::path& path);

  struct Node {
    std::int32_t feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::int32_t leaf_label = 0;
  };
  struct Tree {
    std::vector<Node> nodes;
    int predict(std::span<const double> x) const;
  };

private:
  friend RandomForest train_random_forest(const Dataset&, const RandomForestParams&);

  std::size_t dimension_ = 0;
  RandomForestParams params_;
  std::vector<Tree> trees_;
};

/// Trains on a two-class dataset; deterministic per params.seed (tree t uses
/// a substream derived from (seed, t)).
RandomForest train_random_forest(const Dataset& train, const RandomForestParams& params);

}  // namespace surrex
