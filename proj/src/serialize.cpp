#include "surrex/serialize.hpp"

#include <charconv>
#include <fstream>

#include "surrex/error.hpp"

namespace surrex {

std::string format_double_shortest(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  require(ec == std::errc(), Errc::invalid_argument, "double formatting failed");
  return std::string(buf, ptr);
}

ordered_json explanation_to_json(const Explanation& explanation) {
  ordered_json j;
  j["method"] = method_name(explanation.method);
  j["query"] = explanation.query;
  j["intercept"] = explanation.surrogate.intercept;
  j["coefficients"] = explanation.surrogate.coefficients;
  if (explanation.boundary.has_value()) {
    j["boundary_point"] = explanation.boundary->point;
    j["boundary_distance"] = explanation.boundary->distance_to_query;
  } else {
    j["boundary_point"] = nullptr;
    j["boundary_distance"] = nullptr;
  }
  j["seed"] = explanation.seed;
  j["n_samples"] = explanation.n_samples_used;
  if (explanation.kernel_width.has_value()) {
    j["kernel_width"] = *explanation.kernel_width;
  } else {
    j["kernel_width"] = nullptr;
  }
  if (explanation.r_sx.has_value()) {
    j["r_sx"] = *explanation.r_sx;
  } else {
    j["r_sx"] = nullptr;
  }
  j["ridge_lambda"] = explanation.surrogate.ridge_lambda;
  return j;
}

ordered_json report_to_json(const FidelityReport& report) {
  ordered_json j;
  j["method"] = method_name(report.method);
  j["r_fid_fraction"] = report.r_fid_fraction;
  j["n_eval"] = report.n_eval;
  if (report.mean.has_value()) {
    j["mean"] = *report.mean;
  } else {
    j["mean"] = nullptr;
  }
  if (report.std_dev.has_value()) {
    j["std"] = *report.std_dev;
  } else {
    j["std"] = nullptr;
  }
  j["n_skipped"] = report.n_skipped;
  ordered_json per = ordered_json::array();
  for (const auto& item : report.per_instance) {
    ordered_json e;
    e["index"] = item.index;
    if (item.score.has_value()) {
      e["score"] = *item.score;
    } else {
      e["score"] = "skip";
      e["reason"] = item.skip_reason;
    }
    per.push_back(std::move(e));
  }
  j["per_instance"] = std::move(per);
  return j;
}

void write_heatmap_csv(const std::filesystem::path& path, const Dataset& eval_set,
                       const FidelityReport& report) {
  require(report.per_instance.size() == eval_set.n_rows(), Errc::invalid_argument,
          "heatmap: report covers " + std::to_string(report.per_instance.size()) +
              " instances but evaluation set has " + std::to_string(eval_set.n_rows()));
  std::ofstream out(path, std::ios::binary);
  require(out.good(), Errc::io_error, "cannot open for writing: " + path.string());
  out << "index";
  for (const auto& name : eval_set.feature_names()) out << ',' << name;
  out << ",local_fid\n";
  for (const auto& item : report.per_instance) {
    out << item.index;
    auto row = eval_set.row(item.index);
    for (double v : row) out << ',' << format_double_shortest(v);
    if (item.score.has_value()) {
      out << ',' << format_double_shortest(*item.score);
    } else {
      out << ",skip";
    }
    out << '\n';
  }
  require(out.good(), Errc::io_error, "write failed: " + path.string());
}

void write_json_file(const std::filesystem::path& path, const ordered_json& j) {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), Errc::io_error, "cannot open for writing: " + path.string());
  out << j.dump(1, '\t') << '\n';
  require(out.good(), Errc::io_error, "write failed: " + path.string());
}

ordered_json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), Errc::io_error, "cannot open: " + path.string());
  try {
    return ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    fail(Errc::parse_error, "invalid JSON in " + path.string() + ": " + e.what());
  }
}

}  // namespace surrex
