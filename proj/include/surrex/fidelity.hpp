#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "surrex/blackbox.hpp"
#include "surrex/surrogate.hpp"
#include "surrex/tabular.hpp"

namespace surrex {

struct FidelityConfig {
  double r_fid_fraction = 0.05;  // fraction of max distance from the query to the dataset
  std::size_t n_eval = 1000;     // Monte-Carlo points per neighborhood
  std::uint64_t seed = 0;
};

struct InstanceFidelity {
  std::size_t index = 0;
  std::optional<double> score;
  std::string skip_reason;  // set when score is absent
};

struct FidelityReport {
  Method method = Method::lime;
  double r_fid_fraction = 0.0;
  std::size_t n_eval = 0;
  std::optional<double> mean;     // absent when every instance was skipped
  std::optional<double> std_dev;  // population std over scored instances
  std::size_t n_skipped = 0;
  std::vector<InstanceFidelity> per_instance;
};

/// Probability that a random positive outranks a random negative, ties
/// counting one half (Mann-Whitney). Throws Errc::undefined_auc when labels
/// are single-class.
double auc(std::span<const double> scores, std::span<const int> labels);

/// Local Fidelity: AUC of the surrogate score against hard black-box labels
/// over n_eval points drawn uniformly in the ball B(x, r_fid_abs). Returns
/// nullopt (skip) when the black box is single-class over the drawn points.
/// Evaluation draws use the substream derive_seed(cfg.seed, fidelity_eval),
/// disjoint from every explainer stream.
std::optional<double> local_fidelity(const BlackBoxModel& model, const LinearSurrogate& s,
                                     std::span<const double> x, double r_fid_abs,
                                     const FidelityConfig& cfg);

/// local_fidelity at each fraction, radii resolved via relative_radius(data,
/// x, fraction). Fraction i uses the substream derive_seed(cfg.seed, sweep, i).
std::vector<std::pair<double, std::optional<double>>> radius_sweep(
    const BlackBoxModel& model, const LinearSurrogate& s, std::span<const double> x,
    const Dataset& data, std::span<const double> fractions, const FidelityConfig& cfg);

/// Scores precomputed per-instance explanations; entry i evaluates in the
/// ball of radius relative_radius(train, x_i, r_fid_fraction) with the
/// substream derive_seed(cfg.seed, instance_eval, i). Explanation skips are
/// carried through with their reasons.
FidelityReport fidelity_over_instances(const BlackBoxModel& model,
                                       const std::vector<InstanceExplanation>& explanations,
                                       Method method, const Dataset& eval_set,
                                       const Dataset& train, const FidelityConfig& cfg);

/// explain_dataset + fidelity_over_instances in one call.
FidelityReport dataset_fidelity(const BlackBoxModel& model, const ExplainerConfig& explainer,
                                const Dataset& eval_set, const Dataset& train,
                                const FidelityConfig& cfg);

}  // namespace surrex
