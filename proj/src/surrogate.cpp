#include "surrex/surrogate.hpp"

#include <algorithm>
#include <cmath>

#include "surrex/error.hpp"
#include "surrex/kernels.hpp"
#include "surrex/rng.hpp"

namespace surrex {

double LinearSurrogate::score(std::span<const double> a) const {
  require(a.size() == coefficients.size(), Errc::invalid_argument,
          "surrogate dimension mismatch");
  return intercept + kern::dot(coefficients.data(), a.data(), a.size());
}

const char* method_name(Method method) {
  switch (method) {
    case Method::lime:
      return "lime";
    case Method::lime_k:
      return "lime-k";
    case Method::ls:
      return "ls";
  }
  return "unknown";
}

std::optional<Method> method_from_name(const std::string& name) {
  if (name == "lime") return Method::lime;
  if (name == "lime-k" || name == "lime_k") return Method::lime_k;
  if (name == "ls") return Method::ls;
  return std::nullopt;
}

double default_kernel_width(std::size_t dimension) {
  return 0.75 * std::sqrt(static_cast<double>(dimension));
}

double default_ridge_lambda(Method method) { return method == Method::ls ? 1e-3 : 1.0; }

namespace {

/// In-place LL^T solve of the symmetric positive-definite system A beta = b.
/// Returns false when a pivot degenerates.
bool cholesky_solve(std::vector<double>& A, std::vector<double>& b, std::size_t m) {
  double scale = 0.0;
  for (std::size_t j = 0; j < m; ++j) scale = std::max(scale, std::abs(A[j * m + j]));
  const double tol = scale * 1e-13;
  for (std::size_t j = 0; j < m; ++j) {
    double diag = A[j * m + j];
    for (std::size_t k = 0; k < j; ++k) diag -= A[j * m + k] * A[j * m + k];
    if (!(diag > tol)) return false;
    const double root = std::sqrt(diag);
    A[j * m + j] = root;
    for (std::size_t i = j + 1; i < m; ++i) {
      double v = A[i * m + j];
      for (std::size_t k = 0; k < j; ++k) v -= A[i * m + k] * A[j * m + k];
      A[i * m + j] = v / root;
    }
  }
  // forward then backward substitution
  for (std::size_t i = 0; i < m; ++i) {
    double v = b[i];
    for (std::size_t k = 0; k < i; ++k) v -= A[i * m + k] * b[k];
    b[i] = v / A[i * m + i];
  }
  for (std::size_t ii = m; ii > 0; --ii) {
    const std::size_t i = ii - 1;
    double v = b[i];
    for (std::size_t k = i + 1; k < m; ++k) v -= A[k * m + i] * b[k];
    b[i] = v / A[i * m + i];
  }
  return true;
}

}  // namespace

LinearSurrogate fit_weighted_ridge(const RowMatrix& X, std::span<const double> y,
                                   std::span<const double> weights, double lambda) {
  const std::size_t n = X.rows();
  const std::size_t d = X.cols();
  require(d >= 1, Errc::invalid_argument, "design matrix needs at least one feature");
  require(y.size() == n && weights.size() == n, Errc::invalid_argument,
          "X, y and weights must have equal lengths");
  require(n >= d + 1, Errc::invalid_argument,
          "need at least d+1 rows, got " + std::to_string(n));
  require(lambda >= 0.0, Errc::invalid_argument, "lambda must be nonnegative");
  bool any_positive = false;
  for (double w : weights) {
    require(w >= 0.0, Errc::invalid_argument, "weights must be nonnegative");
    any_positive = any_positive || w > 0.0;
  }
  require(any_positive, Errc::invalid_argument, "at least one weight must be positive");

  // column-major copy so the Gram entries become long contiguous reductions
  std::vector<double> cols(n * d);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = X.row(i);
    for (std::size_t j = 0; j < d; ++j) cols[j * n + i] = row[j];
  }
  const auto col = [&](std::size_t j) { return cols.data() + j * n; };

  const std::size_t m = d + 1;  // intercept first
  std::vector<double> gram(m * m, 0.0);
  std::vector<double> rhs(m, 0.0);
  gram[0] = kern::sum(weights.data(), n);
  rhs[0] = kern::dot(y.data(), weights.data(), n);
  for (std::size_t j = 0; j < d; ++j) {
    gram[(j + 1)] = kern::dot(col(j), weights.data(), n);
    gram[(j + 1) * m] = gram[j + 1];
    rhs[j + 1] = kern::weighted_dot(col(j), y.data(), weights.data(), n);
    for (std::size_t k = j; k < d; ++k) {
      const double v = kern::weighted_dot(col(j), col(k), weights.data(), n);
      gram[(j + 1) * m + (k + 1)] = v;
      gram[(k + 1) * m + (j + 1)] = v;
    }
  }
  for (std::size_t j = 1; j < m; ++j) gram[j * m + j] += lambda;

  if (!cholesky_solve(gram, rhs, m)) {
    fail(Errc::ill_conditioned,
         lambda == 0.0 ? "normal equations are singular; retry with lambda > 0"
                       : "normal equations are numerically singular");
  }

  LinearSurrogate surrogate;
  surrogate.intercept = rhs[0];
  surrogate.coefficients.assign(rhs.begin() + 1, rhs.end());
  surrogate.ridge_lambda = lambda;
  return surrogate;
}

Explanation explain_lime(const BlackBoxModel& model, std::span<const double> x,
                         const FeatureStats& stats, const ExplainerConfig& cfg) {
  require(cfg.method == Method::lime || cfg.method == Method::lime_k, Errc::invalid_argument,
          "explain_lime handles the lime and lime-k methods");
  require(x.size() == model.dimension(), Errc::invalid_argument,
          "query dimension mismatch with model");
  require(stats.means.size() == x.size(), Errc::invalid_argument,
          "stats dimension mismatch with query");
  require(cfg.n_samples >= x.size() + 1, Errc::invalid_argument,
          "n_samples must be at least d+1");

  const double width = cfg.kernel_width.value_or(default_kernel_width(x.size()));
  require(width > 0.0, Errc::invalid_argument, "kernel width must be positive");

  const std::uint64_t sample_seed = rng::derive_seed(cfg.seed, rng::StreamTag::explain_sample);
  const RowMatrix samples = sample_global_normal(stats, cfg.n_samples, sample_seed);
  const std::vector<double> targets = score_batch(model, samples);
  const std::vector<double> weights = rbf_weights(samples, x, width);
  const double lambda = cfg.ridge_lambda.value_or(default_ridge_lambda(cfg.method));

  Explanation explanation;
  explanation.query.assign(x.begin(), x.end());
  explanation.surrogate = fit_weighted_ridge(samples, targets, weights, lambda);
  explanation.method = cfg.method;
  explanation.n_samples_used = cfg.n_samples;
  explanation.seed = cfg.seed;
  explanation.kernel_width = width;
  return explanation;
}

Explanation explain_ls(const BlackBoxModel& model, std::span<const double> x, double data_scale,
                       const ExplainerConfig& cfg) {
  require(cfg.method == Method::ls, Errc::invalid_argument, "explain_ls handles the ls method");
  require(x.size() == model.dimension(), Errc::invalid_argument,
          "query dimension mismatch with model");
  require(data_scale > 0.0, Errc::invalid_argument, "data scale must be positive");
  require(cfg.n_samples >= x.size() + 1, Errc::invalid_argument,
          "n_samples must be at least d+1");
  const double r_sx = cfg.r_sx.value_or(0.3);
  require(r_sx > 0.0 && r_sx <= 1.0, Errc::invalid_argument, "r_sx must lie in (0,1]");

  const GrowingSpheresConfig gs = cfg.growing_spheres.value_or(default_growing_spheres(
      data_scale, rng::derive_seed(cfg.seed, rng::StreamTag::explain_boundary)));
  BoundaryPoint boundary = find_boundary_point(model, x, gs);

  const std::uint64_t ball_seed = rng::derive_seed(cfg.seed, rng::StreamTag::explain_sample);
  const RowMatrix samples =
      sample_ball_uniform(boundary.point, r_sx * data_scale, cfg.n_samples, ball_seed);

  std::vector<double> labels(samples.rows());
  bool seen[2] = {false, false};
  for (std::size_t i = 0; i < samples.rows(); ++i) {
    const int label = model.label(samples.row(i));
    labels[i] = static_cast<double>(label);
    seen[label] = true;
  }
  if (!(seen[0] && seen[1]))
    fail(Errc::one_class_sample,
         "ball sample around the boundary point is single-class (r_sx too small relative to "
         "boundary overshoot or curvature)");

  const std::vector<double> weights(samples.rows(), 1.0);
  const double lambda = cfg.ridge_lambda.value_or(default_ridge_lambda(cfg.method));

  Explanation explanation;
  explanation.query.assign(x.begin(), x.end());
  explanation.surrogate = fit_weighted_ridge(samples, labels, weights, lambda);
  explanation.method = cfg.method;
  explanation.boundary = std::move(boundary);
  explanation.n_samples_used = cfg.n_samples;
  explanation.seed = cfg.seed;
  explanation.r_sx = r_sx;
  return explanation;
}

int surrogate_label(const LinearSurrogate& s, std::span<const double> a) { return s.label(a); }

std::vector<InstanceExplanation> explain_dataset(const BlackBoxModel& model,
                                                 const ExplainerConfig& cfg,
                                                 const Dataset& eval_set, const Dataset& train) {
  require(eval_set.n_rows() >= 1, Errc::invalid_argument, "evaluation set is empty");
  require(eval_set.dimension() == train.dimension(), Errc::invalid_argument,
          "train/eval dimension mismatch");

  const bool is_lime = cfg.method != Method::ls;
  FeatureStats stats;
  if (is_lime) stats = feature_stats(train);

  std::vector<InstanceExplanation> out;
  out.reserve(eval_set.n_rows());
  for (std::size_t i = 0; i < eval_set.n_rows(); ++i) {
    const auto x = eval_set.row(i);
    ExplainerConfig instance_cfg = cfg;
    instance_cfg.seed = rng::derive_seed(cfg.seed, rng::StreamTag::instance_explain, i);

    InstanceExplanation item;
    item.index = i;
    try {
      if (is_lime) {
        item.explanation = explain_lime(model, x, stats, instance_cfg);
      } else {
        const double scale = relative_radius(train, x, 1.0);
        item.explanation = explain_ls(model, x, scale, instance_cfg);
      }
    } catch (const Error& e) {
      if (e.code() == Errc::boundary_not_found) {
        item.skip_reason = "boundary-not-found";
      } else if (e.code() == Errc::one_class_sample) {
        item.skip_reason = "one-class-sample";
      } else {
        throw;
      }
    }
    out.push_back(std::move(item));
  }
  return out;
}

}  // namespace surrex
