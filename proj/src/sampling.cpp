#include "surrex/sampling.hpp"

#include <cmath>
#include <limits>

#include "surrex/error.hpp"
#include "surrex/kernels.hpp"
#include "surrex/rng.hpp"

namespace surrex {

GrowingSpheresConfig default_growing_spheres(double data_scale, std::uint64_t seed) {
  require(data_scale > 0.0, Errc::invalid_argument, "data scale must be positive");
  GrowingSpheresConfig cfg;
  cfg.n_per_step = 1000;
  cfg.initial_radius = 0.01 * data_scale;
  cfg.radius_growth = 0.01 * data_scale;
  cfg.max_radius = 2.0 * data_scale;
  cfg.seed = seed;
  return cfg;
}

RowMatrix sample_global_normal(const FeatureStats& stats, std::size_t n, std::uint64_t seed) {
  require(n >= 1, Errc::invalid_argument, "sample count must be >= 1");
  const std::size_t d = stats.means.size();
  require(d >= 1 && stats.std_devs.size() == d, Errc::invalid_argument,
          "stats means/std_devs must be nonempty and aligned");
  for (double s : stats.std_devs)
    require(s >= 0.0, Errc::invalid_argument, "std_devs must be nonnegative");

  rng::Stream stream(rng::derive_seed(seed, rng::StreamTag::global_normal));
  RowMatrix samples(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    auto row = samples.row(i);
    for (std::size_t j = 0; j < d; ++j)
      row[j] = stats.means[j] + stats.std_devs[j] * stream.next_gaussian();
  }
  return samples;
}

namespace {

void fill_ball_point(rng::Stream& stream, std::span<const double> center, double radius,
                     std::span<double> out) {
  const std::size_t d = center.size();
  double norm_sq = 0.0;
  do {
    norm_sq = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      out[j] = stream.next_gaussian();
      norm_sq += out[j] * out[j];
    }
  } while (norm_sq == 0.0);
  const double magnitude =
      radius * std::pow(stream.next_unit_pos(), 1.0 / static_cast<double>(d));
  const double scale = magnitude / std::sqrt(norm_sq);
  for (std::size_t j = 0; j < d; ++j) out[j] = center[j] + scale * out[j];
}

}  // namespace

RowMatrix sample_ball_uniform(std::span<const double> center, double radius, std::size_t n,
                              std::uint64_t seed) {
  require(n >= 1, Errc::invalid_argument, "sample count must be >= 1");
  require(radius > 0.0, Errc::invalid_argument, "ball radius must be positive");
  require(!center.empty(), Errc::invalid_argument, "ball center must be nonempty");

  rng::Stream stream(rng::derive_seed(seed, rng::StreamTag::ball));
  RowMatrix samples(n, center.size());
  for (std::size_t i = 0; i < n; ++i) fill_ball_point(stream, center, radius, samples.row(i));
  return samples;
}

std::vector<double> rbf_weights(const RowMatrix& samples, std::span<const double> x,
                                double kernel_width) {
  require(kernel_width > 0.0, Errc::invalid_argument, "kernel width must be positive");
  require(samples.rows() == 0 || samples.cols() == x.size(), Errc::invalid_argument,
          "sample dimension mismatch");
  std::vector<double> weights(samples.rows());
  kern::squared_l2_rows(samples.data(), samples.rows(), samples.cols(), x.data(), weights.data());
  const double inv_width_sq = 1.0 / (kernel_width * kernel_width);
  for (double& w : weights) w = std::exp(-w * inv_width_sq);
  return weights;
}

BoundaryPoint find_boundary_point(const BlackBoxModel& model, std::span<const double> x,
                                  const GrowingSpheresConfig& cfg) {
  require(x.size() == model.dimension(), Errc::invalid_argument,
          "query dimension mismatch with model");
  require(cfg.n_per_step >= 1, Errc::invalid_argument, "n_per_step must be >= 1");
  require(cfg.initial_radius > 0.0 && cfg.radius_growth > 0.0, Errc::invalid_argument,
          "radii must be positive");
  require(cfg.initial_radius <= cfg.max_radius, Errc::invalid_argument,
          "initial radius exceeds the search cap");

  const int query_label = model.label(x);
  const std::size_t d = x.size();
  std::vector<double> candidate(d);

  double radius = cfg.initial_radius;
  std::size_t step = 0;
  while (radius <= cfg.max_radius) {
    rng::Stream stream(rng::derive_seed(cfg.seed, rng::StreamTag::boundary_step, step));
    double best_sq = std::numeric_limits<double>::infinity();
    FeatureVector best;
    for (std::size_t i = 0; i < cfg.n_per_step; ++i) {
      fill_ball_point(stream, x, radius, candidate);
      if (model.label(candidate) == query_label) continue;
      const double sq = kern::squared_l2(candidate.data(), x.data(), d);
      if (sq < best_sq) {
        best_sq = sq;
        best.assign(candidate.begin(), candidate.end());
      }
    }
    if (!best.empty()) {
      return BoundaryPoint{std::move(best), std::sqrt(best_sq), step + 1};
    }
    radius += cfg.radius_growth;
    ++step;
  }
  fail(Errc::boundary_not_found,
       "no label flip within max radius " + std::to_string(cfg.max_radius) +
           " (locally constant black box or cap too small)");
}

}  // namespace surrex
