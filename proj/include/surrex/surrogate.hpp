#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "surrex/blackbox.hpp"
#include "surrex/sampling.hpp"
#include "surrex/tabular.hpp"

namespace surrex {

/// The explanation carrier: an affine score whose 0.5 level set is the
/// surrogate decision boundary.
struct LinearSurrogate {
  double intercept = 0.0;
  std::vector<double> coefficients;
  double ridge_lambda = 0.0;

  double score(std::span<const double> a) const;
  int label(std::span<const double> a) const { return score(a) >= 0.5 ? 1 : 0; }
};

enum class Method { lime, lime_k, ls };

const char* method_name(Method method);
std::optional<Method> method_from_name(const std::string& name);

struct ExplainerConfig {
  Method method = Method::lime;
  std::size_t n_samples = 5000;
  std::optional<double> kernel_width;  // lime / lime_k; default 0.75 * sqrt(d)
  std::optional<double> r_sx;          // ls; fraction of data scale, default 0.3
  std::optional<double> ridge_lambda;  // default 1.0 (lime), 1e-3 (ls)
  std::uint64_t seed = 0;
  std::optional<GrowingSpheresConfig> growing_spheres;  // ls; default from data scale
};

struct Explanation {
  FeatureVector query;
  LinearSurrogate surrogate;
  Method method = Method::lime;
  std::optional<BoundaryPoint> boundary;  // present iff method == ls
  std::size_t n_samples_used = 0;
  std::uint64_t seed = 0;
  std::optional<double> kernel_width;  // resolved value (lime / lime_k)
  std::optional<double> r_sx;          // resolved value (ls)
};

double default_kernel_width(std::size_t dimension);  // 0.75 * sqrt(d)
double default_ridge_lambda(Method method);

/// Minimizes sum_i w_i (y_i - b0 - <w, x_i>)^2 + lambda * ||w||^2 with the
/// intercept unpenalized, via the weighted normal equations and a Cholesky
/// solve. Throws Errc::ill_conditioned when the system is singular (use
/// lambda > 0).
LinearSurrogate fit_weighted_ridge(const RowMatrix& X, std::span<const double> y,
                                   std::span<const double> weights, double lambda);

/// LIME pipeline: global-normal sample around the training distribution,
/// soft probability targets, RBF distance weights, weighted ridge.
Explanation explain_lime(const BlackBoxModel& model, std::span<const double> x,
                         const FeatureStats& stats, const ExplainerConfig& cfg);

/// Local Surrogate pipeline: boundary point via growing spheres, uniform ball
/// sample of radius r_sx * data_scale around it, hard labels, ridge with
/// uniform weights. data_scale is typically relative_radius(train, x, 1.0).
Explanation explain_ls(const BlackBoxModel& model, std::span<const double> x, double data_scale,
                       const ExplainerConfig& cfg);

int surrogate_label(const LinearSurrogate& s, std::span<const double> a);

struct InstanceExplanation {
  std::size_t index = 0;
  std::optional<Explanation> explanation;
  std::string skip_reason;  // set when the explainer skipped this instance
};

/// Explains every row of eval_set against `model`, deriving one substream per
/// instance from cfg.seed. boundary-not-found and one-class-sample failures
/// become per-instance skips; other errors propagate.
std::vector<InstanceExplanation> explain_dataset(const BlackBoxModel& model,
                                                 const ExplainerConfig& cfg,
                                                 const Dataset& eval_set, const Dataset& train);

}  // namespace surrex
