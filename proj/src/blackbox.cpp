#include "surrex/blackbox.hpp"

#include <cmath>

#include "surrex/error.hpp"
#include "surrex/kernels.hpp"

namespace surrex {

namespace {

void check_dimension(const BlackBoxModel& model, std::size_t got) {
  require(got == model.dimension(), Errc::invalid_argument,
          "dimension mismatch: model expects " + std::to_string(model.dimension()) + ", got " +
              std::to_string(got));
}

class HalfspaceOracle final : public BlackBoxModel {
public:
  HalfspaceOracle(FeatureVector w, double b0) : w_(std::move(w)), b0_(b0) {}
  std::size_t dimension() const override { return w_.size(); }
  double score(std::span<const double> x) const override {
    check_dimension(*this, x.size());
    return kern::dot(w_.data(), x.data(), w_.size()) + b0_ >= 0.0 ? 1.0 : 0.0;
  }

private:
  FeatureVector w_;
  double b0_;
};

class BallOracle final : public BlackBoxModel {
public:
  BallOracle(FeatureVector center, double radius) : center_(std::move(center)), radius_(radius) {}
  std::size_t dimension() const override { return center_.size(); }
  double score(std::span<const double> x) const override {
    check_dimension(*this, x.size());
    const double sq = kern::squared_l2(x.data(), center_.data(), center_.size());
    return sq <= radius_ * radius_ ? 1.0 : 0.0;
  }

private:
  FeatureVector center_;
  double radius_;
};

class CheckerboardOracle final : public BlackBoxModel {
public:
  CheckerboardOracle(std::size_t dimension, double cell) : dimension_(dimension), cell_(cell) {}
  std::size_t dimension() const override { return dimension_; }
  double score(std::span<const double> x) const override {
    check_dimension(*this, x.size());
    long long parity = 0;
    for (double v : x) parity += static_cast<long long>(std::floor(v / cell_));
    return (parity % 2 + 2) % 2 == 1 ? 1.0 : 0.0;
  }

private:
  std::size_t dimension_;
  double cell_;
};

}  // namespace

std::vector<double> score_batch(const BlackBoxModel& model, const RowMatrix& xs) {
  require(xs.rows() == 0 || xs.cols() == model.dimension(), Errc::invalid_argument,
          "batch dimension mismatch");
  std::vector<double> scores(xs.rows());
  for (std::size_t i = 0; i < xs.rows(); ++i) scores[i] = model.score(xs.row(i));
  return scores;
}

std::vector<double> score_batch(const BlackBoxModel& model, const std::vector<FeatureVector>& xs) {
  std::vector<double> scores;
  scores.reserve(xs.size());
  for (const auto& x : xs) scores.push_back(model.score(x));
  return scores;
}

std::unique_ptr<BlackBoxModel> make_halfspace_oracle(FeatureVector w, double b0) {
  require(!w.empty(), Errc::invalid_argument, "halfspace normal must be nonempty");
  bool nonzero = false;
  for (double v : w) nonzero = nonzero || v != 0.0;
  require(nonzero, Errc::invalid_argument, "halfspace normal must be nonzero");
  return std::make_unique<HalfspaceOracle>(std::move(w), b0);
}

std::unique_ptr<BlackBoxModel> make_ball_oracle(FeatureVector center, double radius) {
  require(!center.empty(), Errc::invalid_argument, "ball center must be nonempty");
  require(radius > 0.0, Errc::invalid_argument, "ball radius must be positive");
  return std::make_unique<BallOracle>(std::move(center), radius);
}

std::unique_ptr<BlackBoxModel> make_checkerboard_oracle(std::size_t dimension, double cell) {
  require(dimension >= 1, Errc::invalid_argument, "checkerboard dimension must be >= 1");
  require(cell > 0.0, Errc::invalid_argument, "checkerboard cell must be positive");
  return std::make_unique<CheckerboardOracle>(dimension, cell);
}

}  // namespace surrex
