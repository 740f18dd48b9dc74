#include "surrex/fidelity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "surrex/error.hpp"
#include "surrex/kernels.hpp"
#include "surrex/rng.hpp"
#include "surrex/sampling.hpp"

namespace surrex {

double auc(std::span<const double> scores, std::span<const int> labels) {
  const std::size_t n = scores.size();
  require(labels.size() == n, Errc::invalid_argument, "scores/labels length mismatch");
  std::size_t n_pos = 0;
  for (int label : labels) {
    require(label == 0 || label == 1, Errc::invalid_argument, "labels must be 0/1");
    n_pos += static_cast<std::size_t>(label);
  }
  const std::size_t n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0)
    fail(Errc::undefined_auc, "AUC is undefined for single-class labels");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // average ranks over tie groups, accumulate positive ranks
  double rank_sum_pos = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j + 1);  // 1-based
    for (std::size_t k = i; k <= j; ++k)
      if (labels[order[k]] == 1) rank_sum_pos += avg_rank;
    i = j + 1;
  }
  const double u = rank_sum_pos - 0.5 * static_cast<double>(n_pos) * static_cast<double>(n_pos + 1);
  return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

std::optional<double> local_fidelity(const BlackBoxModel& model, const LinearSurrogate& s,
                                     std::span<const double> x, double r_fid_abs,
                                     const FidelityConfig& cfg) {
  require(x.size() == model.dimension(), Errc::invalid_argument,
          "query dimension mismatch with model");
  require(s.coefficients.size() == x.size(), Errc::invalid_argument,
          "surrogate dimension mismatch with query");
  require(r_fid_abs > 0.0, Errc::invalid_argument, "fidelity radius must be positive");
  require(cfg.n_eval >= 2, Errc::invalid_argument, "n_eval must be >= 2");

  const std::uint64_t eval_seed = rng::derive_seed(cfg.seed, rng::StreamTag::fidelity_eval);
  const RowMatrix points = sample_ball_uniform(x, r_fid_abs, cfg.n_eval, eval_seed);

  std::vector<int> bb_labels(points.rows());
  bool seen[2] = {false, false};
  for (std::size_t i = 0; i < points.rows(); ++i) {
    bb_labels[i] = model.label(points.row(i));
    seen[bb_labels[i]] = true;
  }
  if (!(seen[0] && seen[1])) return std::nullopt;  // skip: neighborhood is single-class

  std::vector<double> surrogate_scores(points.rows());
  for (std::size_t i = 0; i < points.rows(); ++i)
    surrogate_scores[i] = s.intercept + kern::dot(s.coefficients.data(), points.row(i).data(),
                                                  s.coefficients.size());
  return auc(surrogate_scores, bb_labels);
}

std::vector<std::pair<double, std::optional<double>>> radius_sweep(
    const BlackBoxModel& model, const LinearSurrogate& s, std::span<const double> x,
    const Dataset& data, std::span<const double> fractions, const FidelityConfig& cfg) {
  require(!fractions.empty(), Errc::invalid_argument, "fractions must be nonempty");
  for (std::size_t i = 0; i < fractions.size(); ++i) {
    require(fractions[i] > 0.0 && fractions[i] <= 1.0, Errc::invalid_argument,
            "fractions must lie in (0,1]");
    require(i == 0 || fractions[i] > fractions[i - 1], Errc::invalid_argument,
            "fractions must be strictly increasing");
  }

  std::vector<std::pair<double, std::optional<double>>> out;
  out.reserve(fractions.size());
  for (std::size_t i = 0; i < fractions.size(); ++i) {
    const double r_abs = relative_radius(data, x, fractions[i]);
    FidelityConfig step_cfg = cfg;
    step_cfg.seed = rng::derive_seed(cfg.seed, rng::StreamTag::sweep, i);
    out.emplace_back(fractions[i], local_fidelity(model, s, x, r_abs, step_cfg));
  }
  return out;
}

FidelityReport fidelity_over_instances(const BlackBoxModel& model,
                                       const std::vector<InstanceExplanation>& explanations,
                                       Method method, const Dataset& eval_set,
                                       const Dataset& train, const FidelityConfig& cfg) {
  require(!explanations.empty(), Errc::invalid_argument, "no explanations to evaluate");

  FidelityReport report;
  report.method = method;
  report.r_fid_fraction = cfg.r_fid_fraction;
  report.n_eval = cfg.n_eval;
  report.per_instance.reserve(explanations.size());

  std::vector<double> scored;
  for (const auto& item : explanations) {
    InstanceFidelity row;
    row.index = item.index;
    if (!item.explanation.has_value()) {
      row.skip_reason = item.skip_reason;
    } else {
      const auto x = eval_set.row(item.index);
      const double r_abs = relative_radius(train, x, cfg.r_fid_fraction);
      FidelityConfig instance_cfg = cfg;
      instance_cfg.seed = rng::derive_seed(cfg.seed, rng::StreamTag::instance_eval, item.index);
      const auto score =
          local_fidelity(model, item.explanation->surrogate, x, r_abs, instance_cfg);
      if (score.has_value()) {
        row.score = *score;
        scored.push_back(*score);
      } else {
        row.skip_reason = "one-class-neighborhood";
      }
    }
    report.per_instance.push_back(std::move(row));
  }

  report.n_skipped = report.per_instance.size() - scored.size();
  if (!scored.empty()) {
    const double mean = kern::sum(scored.data(), scored.size()) / static_cast<double>(scored.size());
    double var = 0.0;
    for (double v : scored) var += (v - mean) * (v - mean);
    var /= static_cast<double>(scored.size());
    report.mean = mean;
    report.std_dev = std::sqrt(var);
  }
  return report;
}

FidelityReport dataset_fidelity(const BlackBoxModel& model, const ExplainerConfig& explainer,
                                const Dataset& eval_set, const Dataset& train,
                                const FidelityConfig& cfg) {
  const auto explanations = explain_dataset(model, explainer, eval_set, train);
  return fidelity_over_instances(model, explanations, explainer.method, eval_set, train, cfg);
}

}  // namespace surrex
