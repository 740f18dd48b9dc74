#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace surrex {

/// One instance: an ordered, finite, dense vector of feature values.
using FeatureVector = std::vector<double>;

/// Row-major dense matrix; the common currency between samplers, models and
/// the kernels layer.
class RowMatrix {
public:
  RowMatrix() = default;
  RowMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), values_(rows * cols, 0.0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::span<double> row(std::size_t i) { return {values_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {values_.data() + i * cols_, cols_}; }
  double* data() { return values_.data(); }
  const double* data() const { return values_.data(); }

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

/// Labeled binary-classification table. Rows are finite, labels are 0/1 and
/// every row shares the same dimension.
class Dataset {
public:
  Dataset(std::size_t dimension, std::vector<std::string> feature_names);

  static Dataset with_default_names(std::size_t dimension);

  void add_row(std::span<const double> values, int label);
  void reserve(std::size_t n);

  std::size_t n_rows() const { return labels_.size(); }
  std::size_t dimension() const { return dimension_; }
  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * dimension_, dimension_};
  }
  FeatureVector row_copy(std::size_t i) const;
  int label(std::size_t i) const { return labels_[i]; }
  const std::vector<int>& labels() const { return labels_; }
  const std::vector<std::string>& feature_names() const { return feature_names_; }
  const double* data() const { return values_.data(); }

  /// True when both classes occur at least once.
  bool has_both_classes() const;

private:
  std::size_t dimension_;
  std::vector<std::string> feature_names_;
  std::vector<double> values_;  // row-major
  std::vector<int> labels_;
};

/// Per-feature sample mean and population standard deviation (divisor n).
struct FeatureStats {
  std::vector<double> means;
  std::vector<double> std_devs;
};

struct CsvInfo {
  std::vector<std::string> dropped_columns;  // non-numeric, when dropping is enabled
  std::vector<std::string> class_values;     // sorted; class_values[0] -> label 0
};

/// Two interleaved half-circle arcs with Gaussian coordinate noise; labels 0
/// (upper arc, centered at the origin) and 1 (lower arc, x offset +1, y
/// offset -0.5).
Dataset generate_half_moons(std::size_t n, double noise, std::uint64_t seed);

/// Parses an RFC-4180-style CSV with a header row into a Dataset. The target
/// column may hold at most two distinct values; the lexicographically smaller
/// one maps to label 0. Non-numeric feature columns are dropped when
/// `drop_non_numeric` is set and rejected otherwise.
Dataset load_csv(const std::filesystem::path& path, const std::string& target_column,
                 bool drop_non_numeric, CsvInfo* info = nullptr);

/// Writes features plus a `label` column; doubles use shortest round-trip
/// formatting so the bytes are stable.
void save_csv(const Dataset& data, const std::filesystem::path& path);

/// Disjoint shuffled partition with sizes ceil(n*(1-f)) / floor(n*f).
std::pair<Dataset, Dataset> train_test_split(const Dataset& data, double test_fraction,
                                             std::uint64_t seed);

FeatureStats feature_stats(const Dataset& data);

/// fraction * max_i ||row_i - x||_2
double relative_radius(const Dataset& data, std::span<const double> x, double fraction);

}  // namespace surrex
