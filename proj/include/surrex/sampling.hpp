#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "surrex/blackbox.hpp"
#include "surrex/tabular.hpp"

namespace surrex {

/// Expanding-ball boundary search parameters. The radius starts at
/// initial_radius and grows additively by radius_growth up to max_radius;
/// n_per_step points are drawn uniformly in the ball at each step.
struct GrowingSpheresConfig {
  std::size_t n_per_step = 1000;
  double initial_radius = 0.0;
  double radius_growth = 0.0;
  double max_radius = 0.0;
  std::uint64_t seed = 0;
};

/// Defaults proportional to the data scale (typically relative_radius(train,
/// x, 1.0)): 1% steps, cap at twice the scale.
GrowingSpheresConfig default_growing_spheres(double data_scale, std::uint64_t seed);

/// Closest found instance whose black-box label differs from the query's.
struct BoundaryPoint {
  FeatureVector point;
  double distance_to_query = 0.0;
  std::size_t steps_taken = 0;
};

/// n i.i.d. draws; feature j ~ Normal(means[j], std_devs[j]), independent
/// across features. A zero std_dev pins the feature to its mean.
RowMatrix sample_global_normal(const FeatureStats& stats, std::size_t n, std::uint64_t seed);

/// n i.i.d. draws uniform over the closed l2 ball: direction from a
/// normalized Gaussian vector, magnitude radius * U^(1/d).
RowMatrix sample_ball_uniform(std::span<const double> center, double radius, std::size_t n,
                              std::uint64_t seed);

/// weight_i = exp(-||samples_i - x||^2 / kernel_width^2), order-preserving.
std::vector<double> rbf_weights(const RowMatrix& samples, std::span<const double> x,
                                double kernel_width);

/// Grows a sampling ball around x until a label flip is observed; returns the
/// flipped point closest to x within the triggering step. Throws
/// Errc::boundary_not_found when max_radius is reached without a flip. Step s
/// draws from the substream derive_seed(cfg.seed, boundary_step, s).
BoundaryPoint find_boundary_point(const BlackBoxModel& model, std::span<const double> x,
                                  const GrowingSpheresConfig& cfg);

}  // namespace surrex
