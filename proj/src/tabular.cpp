#include "surrex/tabular.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>

#include "surrex/error.hpp"
#include "surrex/kernels.hpp"
#include "surrex/rng.hpp"

namespace surrex {

namespace {

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::optional<double> parse_double(const std::string& cell) {
  const char* first = cell.data();
  const char* last = first + cell.size();
  // tolerate surrounding spaces
  while (first != last && (*first == ' ' || *first == '\t')) ++first;
  while (last != first && (*(last - 1) == ' ' || *(last - 1) == '\t')) --last;
  if (first == last) return std::nullopt;
  double value = 0.0;
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc() || res.ptr != last) return std::nullopt;
  if (!std::isfinite(value)) return std::nullopt;
  return value;
}

bool needs_quoting(const std::string& field) {
  return field.find_first_of(",\"\r\n") != std::string::npos;
}

std::string quote_field(const std::string& field) {
  if (!needs_quoting(field)) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

/// Splits one RFC-4180 record; the caller feeds logical lines (quoted
/// newlines already joined).
std::vector<std::string> split_record(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool in_quotes = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      in_quotes = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field += c;
    }
  }
  fields.push_back(std::move(field));
  return fields;
}

std::vector<std::vector<std::string>> read_records(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::io_error, "cannot open file: " + path.string());
  std::vector<std::vector<std::string>> records;
  std::string line;
  std::string pending;
  auto count_quotes = [](const std::string& s) {
    return std::count(s.begin(), s.end(), '"');
  };
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!pending.empty()) {
      pending += '\n';
      pending += line;
    } else {
      pending = line;
    }
    if (count_quotes(pending) % 2 != 0) continue;  // newline inside quotes
    if (!pending.empty()) records.push_back(split_record(pending));
    pending.clear();
  }
  if (!pending.empty()) records.push_back(split_record(pending));
  return records;
}

}  // namespace

Dataset::Dataset(std::size_t dimension, std::vector<std::string> feature_names)
    : dimension_(dimension), feature_names_(std::move(feature_names)) {
  require(dimension_ >= 1, Errc::invalid_argument, "dataset dimension must be >= 1");
  require(feature_names_.size() == dimension_, Errc::invalid_argument,
          "feature name count must equal dimension");
}

Dataset Dataset::with_default_names(std::size_t dimension) {
  std::vector<std::string> names;
  names.reserve(dimension);
  for (std::size_t j = 0; j < dimension; ++j) names.push_back("x" + std::to_string(j));
  return Dataset(dimension, std::move(names));
}

void Dataset::add_row(std::span<const double> values, int label) {
  require(values.size() == dimension_, Errc::invalid_argument,
          "row dimension mismatch: expected " + std::to_string(dimension_));
  require(label == 0 || label == 1, Errc::invalid_argument, "labels must be 0 or 1");
  for (double v : values)
    require(std::isfinite(v), Errc::invalid_argument, "feature values must be finite");
  values_.insert(values_.end(), values.begin(), values.end());
  labels_.push_back(label);
}

void Dataset::reserve(std::size_t n) {
  values_.reserve(n * dimension_);
  labels_.reserve(n);
}

FeatureVector Dataset::row_copy(std::size_t i) const {
  const auto r = row(i);
  return FeatureVector(r.begin(), r.end());
}

bool Dataset::has_both_classes() const {
  bool seen[2] = {false, false};
  for (int label : labels_) seen[label] = true;
  return seen[0] && seen[1];
}

Dataset generate_half_moons(std::size_t n, double noise, std::uint64_t seed) {
  require(n >= 2, Errc::invalid_argument, "half-moons needs n >= 2");
  require(noise >= 0.0, Errc::invalid_argument, "noise must be nonnegative");

  const std::size_t n_upper = n / 2;
  const std::size_t n_lower = n - n_upper;
  rng::Stream stream(rng::derive_seed(seed, rng::StreamTag::half_moons));

  Dataset data(2, {"x0", "x1"});
  data.reserve(n);
  auto arc_angle = [](std::size_t i, std::size_t count) {
    return count > 1 ? std::numbers::pi * static_cast<double>(i) / static_cast<double>(count - 1)
                     : 0.0;
  };
  for (std::size_t i = 0; i < n_upper; ++i) {
    const double t = arc_angle(i, n_upper);
    double p[2] = {std::cos(t), std::sin(t)};
    p[0] += noise * stream.next_gaussian();
    p[1] += noise * stream.next_gaussian();
    data.add_row(p, 0);
  }
  for (std::size_t i = 0; i < n_lower; ++i) {
    const double t = arc_angle(i, n_lower);
    double p[2] = {1.0 - std::cos(t), 0.5 - std::sin(t)};
    p[0] += noise * stream.next_gaussian();
    p[1] += noise * stream.next_gaussian();
    data.add_row(p, 1);
  }
  return data;
}

Dataset load_csv(const std::filesystem::path& path, const std::string& target_column,
                 bool drop_non_numeric, CsvInfo* info) {
  if (!std::filesystem::exists(path)) fail(Errc::io_error, "no such file: " + path.string());
  const auto records = read_records(path);
  require(!records.empty(), Errc::parse_error, "empty CSV: " + path.string());

  const auto& header = records.front();
  std::size_t target_idx = header.size();
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (header[j] == target_column) {
      target_idx = j;
      break;
    }
  }
  require(target_idx < header.size(), Errc::parse_error,
          "target column '" + target_column + "' not found in " + path.string());

  const std::size_t n = records.size() - 1;
  require(n >= 1, Errc::parse_error, "CSV has a header but no data rows");

  // column classification pass
  std::vector<bool> numeric(header.size(), true);
  for (std::size_t r = 1; r < records.size(); ++r) {
    require(records[r].size() == header.size(), Errc::parse_error,
            "row " + std::to_string(r) + " has " + std::to_string(records[r].size()) +
                " fields, header has " + std::to_string(header.size()));
    for (std::size_t j = 0; j < header.size(); ++j) {
      if (j == target_idx) continue;
      if (numeric[j] && !parse_double(records[r][j])) numeric[j] = false;
    }
  }

  std::vector<std::size_t> feature_cols;
  std::vector<std::string> feature_names;
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (j == target_idx) continue;
    if (numeric[j]) {
      feature_cols.push_back(j);
      feature_names.push_back(header[j]);
    } else if (drop_non_numeric) {
      if (info != nullptr) info->dropped_columns.push_back(header[j]);
    } else {
      fail(Errc::parse_error, "non-numeric cell in column '" + header[j] +
                                  "' (pass drop_non_numeric to drop such columns)");
    }
  }
  require(!feature_cols.empty(), Errc::no_features, "no numeric feature columns remain");

  // target mapping: lexicographically smaller distinct value -> 0
  std::map<std::string, int> classes;
  for (std::size_t r = 1; r < records.size(); ++r) classes.emplace(records[r][target_idx], -1);
  require(classes.size() <= 2, Errc::multiclass_unsupported,
          "target column has " + std::to_string(classes.size()) +
              " distinct values; only binary classification is supported");
  int next_label = 0;
  for (auto& [value, label] : classes) label = next_label++;
  if (info != nullptr)
    for (const auto& [value, label] : classes) info->class_values.push_back(value);

  Dataset data(feature_cols.size(), std::move(feature_names));
  data.reserve(n);
  std::vector<double> row(feature_cols.size());
  for (std::size_t r = 1; r < records.size(); ++r) {
    for (std::size_t k = 0; k < feature_cols.size(); ++k) {
      const auto parsed = parse_double(records[r][feature_cols[k]]);
      require(parsed.has_value(), Errc::parse_error,
              "unparseable numeric cell at row " + std::to_string(r) + ", column '" +
                  header[feature_cols[k]] + "'");
      row[k] = *parsed;
    }
    data.add_row(row, classes.at(records[r][target_idx]));
  }
  return data;
}

void save_csv(const Dataset& data, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::io_error, "cannot write file: " + path.string());
  for (std::size_t j = 0; j < data.dimension(); ++j) {
    if (j > 0) out << ',';
    out << quote_field(data.feature_names()[j]);
  }
  out << ",label\n";
  for (std::size_t i = 0; i < data.n_rows(); ++i) {
    const auto row = data.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j > 0) out << ',';
      out << format_double(row[j]);
    }
    out << ',' << data.label(i) << '\n';
  }
  if (!out) fail(Errc::io_error, "write failed: " + path.string());
}

std::pair<Dataset, Dataset> train_test_split(const Dataset& data, double test_fraction,
                                             std::uint64_t seed) {
  require(test_fraction > 0.0 && test_fraction < 1.0, Errc::invalid_argument,
          "test fraction must lie in (0,1)");
  const std::size_t n = data.n_rows();
  const std::size_t n_test = static_cast<std::size_t>(std::floor(static_cast<double>(n) * test_fraction));
  const std::size_t n_train = n - n_test;
  require(n_train >= 1 && n_test >= 1, Errc::invalid_argument,
          "split would leave an empty part (n=" + std::to_string(n) + ")");

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  rng::Stream stream(rng::derive_seed(seed, rng::StreamTag::split));
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = stream.next_below(i);
    std::swap(order[i - 1], order[j]);
  }

  Dataset train(data.dimension(), data.feature_names());
  Dataset test(data.dimension(), data.feature_names());
  train.reserve(n_train);
  test.reserve(n_test);
  for (std::size_t i = 0; i < n_train; ++i)
    train.add_row(data.row(order[i]), data.label(order[i]));
  for (std::size_t i = n_train; i < n; ++i)
    test.add_row(data.row(order[i]), data.label(order[i]));
  return {std::move(train), std::move(test)};
}

FeatureStats feature_stats(const Dataset& data) {
  require(data.n_rows() >= 2, Errc::invalid_argument, "feature_stats needs at least 2 rows");
  const std::size_t n = data.n_rows();
  const std::size_t d = data.dimension();
  FeatureStats stats;
  stats.means.assign(d, 0.0);
  stats.std_devs.assign(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = data.row(i);
    for (std::size_t j = 0; j < d; ++j) stats.means[j] += row[j];
  }
  for (std::size_t j = 0; j < d; ++j) stats.means[j] /= static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = data.row(i);
    for (std::size_t j = 0; j < d; ++j) {
      const double diff = row[j] - stats.means[j];
      stats.std_devs[j] += diff * diff;
    }
  }
  for (std::size_t j = 0; j < d; ++j)
    stats.std_devs[j] = std::sqrt(stats.std_devs[j] / static_cast<double>(n));
  return stats;
}

double relative_radius(const Dataset& data, std::span<const double> x, double fraction) {
  require(data.n_rows() >= 1, Errc::invalid_argument, "relative_radius needs a nonempty dataset");
  require(x.size() == data.dimension(), Errc::invalid_argument,
          "query dimension mismatch: expected " + std::to_string(data.dimension()));
  require(fraction > 0.0 && fraction <= 1.0, Errc::invalid_argument,
          "fraction must lie in (0,1]");
  std::vector<double> sq(data.n_rows());
  kern::squared_l2_rows(data.data(), data.n_rows(), data.dimension(), x.data(), sq.data());
  const double max_sq = *std::max_element(sq.begin(), sq.end());
  return fraction * std::sqrt(max_sq);
}

}  // namespace surrex
