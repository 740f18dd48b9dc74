#pragma once

#include <memory>
#include <span>
#include <vector>

#include "surrex/tabular.hpp"

namespace surrex {

/// Opaque probability-scoring classifier. score(x) is the probability of
/// class 1; label(x) thresholds at 0.5 with ties resolving to class 1.
class BlackBoxModel {
public:
  virtual ~BlackBoxModel() = default;
  virtual std::size_t dimension() const = 0;
  virtual double score(std::span<const double> x) const = 0;
  int label(std::span<const double> x) const { return score(x) >= 0.5 ? 1 : 0; }
};

std::vector<double> score_batch(const BlackBoxModel& model, const RowMatrix& xs);
std::vector<double> score_batch(const BlackBoxModel& model, const std::vector<FeatureVector>& xs);

// Analytic oracles with closed-form decision boundaries; scores are a hard
// 0/1 step. Test fixtures for the samplers and the boundary search.

/// label 1 iff <w, x> + b0 >= 0. w must have a nonzero entry.
std::unique_ptr<BlackBoxModel> make_halfspace_oracle(FeatureVector w, double b0);

/// label 1 iff ||x - center|| <= radius, radius > 0.
std::unique_ptr<BlackBoxModel> make_ball_oracle(FeatureVector center, double radius);

/// label = parity of sum_j floor(x_j / cell), cell > 0.
std::unique_ptr<BlackBoxModel> make_checkerboard_oracle(std::size_t dimension, double cell);

}  // namespace surrex
