#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <vector>

#include "surrex/blackbox.hpp"
#include "surrex/error.hpp"
#include "surrex/fidelity.hpp"
#include "surrex/rng.hpp"
#include "surrex/surrogate.hpp"
#include "surrex/tabular.hpp"

using namespace surrex;

namespace {

// O(n^2) Mann-Whitney oracle: count positive/negative pairs, ties half.
double auc_pairs(const std::vector<double>& scores, const std::vector<int>& labels) {
  double wins = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] != 1) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j] != 0) continue;
      ++pairs;
      if (scores[i] > scores[j])
        wins += 1.0;
      else if (scores[i] == scores[j])
        wins += 0.5;
    }
  }
  return wins / static_cast<double>(pairs);
}

// Black box whose probability surface is itself affine: score = clamp(s(x)).
class AffineBox final : public BlackBoxModel {
public:
  explicit AffineBox(LinearSurrogate s) : s_(std::move(s)) {}
  std::size_t dimension() const override { return s_.coefficients.size(); }
  double score(std::span<const double> x) const override {
    return std::clamp(s_.score(x), 0.0, 1.0);
  }

private:
  LinearSurrogate s_;
};

LinearSurrogate ramp() {
  LinearSurrogate s;
  s.intercept = 0.5;
  s.coefficients = {1.0, 0.0};
  return s;
}

}  // namespace

TEST_CASE("auc on closed-form rankings") {
  CHECK(auc(std::vector<double>{0.9, 0.1}, std::vector<int>{1, 0}) == 1.0);
  CHECK(auc(std::vector<double>{0.1, 0.9}, std::vector<int>{1, 0}) == 0.0);
  CHECK(auc(std::vector<double>{0.5, 0.5}, std::vector<int>{1, 0}) == 0.5);
  CHECK(auc(std::vector<double>{0.2, 0.8, 0.4}, std::vector<int>{0, 1, 0}) == 1.0);
}

TEST_CASE("auc matches exhaustive pair counting") {
  rng::Stream st(404);
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = 5 + st.next_below(200);
    std::vector<double> scores(n);
    std::vector<int> labels(n);
    bool zero = false, one = false;
    for (std::size_t i = 0; i < n; ++i) {
      scores[i] = st.next_below(20) / 20.0;  // coarse grid so ties occur
      labels[i] = static_cast<int>(st.next_below(2));
      (labels[i] == 0 ? zero : one) = true;
    }
    if (!zero || !one) {
      labels[0] = 0;
      labels[n - 1] = 1;
    }
    CHECK(std::abs(auc(scores, labels) - auc_pairs(scores, labels)) <= 1e-12);
  }
}

TEST_CASE("auc is invariant under strictly increasing transforms") {
  rng::Stream st(7);
  std::vector<double> scores(60);
  std::vector<int> labels(60);
  for (std::size_t i = 0; i < 60; ++i) {
    scores[i] = st.next_uniform(-2.0, 2.0);
    labels[i] = static_cast<int>(st.next_below(2));
  }
  labels[0] = 0;
  labels[1] = 1;
  const double base = auc(scores, labels);

  auto affine = scores, cubic = scores;
  for (auto& v : affine) v = 3.0 * v + 11.0;
  for (auto& v : cubic) v = v * v * v;
  CHECK(auc(affine, labels) == base);
  CHECK(auc(cubic, labels) == base);

  auto negated = scores;
  for (auto& v : negated) v = -v;
  CHECK(auc(negated, labels) == doctest::Approx(1.0 - base));  // no ties at random doubles
}

TEST_CASE("auc requires both classes") {
  try {
    auc(std::vector<double>{0.1, 0.2}, std::vector<int>{1, 1});
    FAIL("expected undefined-auc error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::undefined_auc);
  }
}

TEST_CASE("local fidelity is perfect for the model's own ramp") {
  const AffineBox box(ramp());
  FidelityConfig cfg;
  cfg.n_eval = 500;
  cfg.seed = 5;
  const std::vector<double> x = {0.0, 0.0};  // ball straddles the 0.5 level set
  const auto self = local_fidelity(box, ramp(), x, 0.4, cfg);
  REQUIRE(self.has_value());
  CHECK(*self == 1.0);

  auto anti = ramp();
  anti.coefficients[0] = -1.0;  // reversed ranking
  const auto worst = local_fidelity(box, anti, x, 0.4, cfg);
  REQUIRE(worst.has_value());
  CHECK(*worst == 0.0);
}

TEST_CASE("local fidelity skips one-class neighborhoods") {
  const AffineBox box(ramp());
  FidelityConfig cfg;
  cfg.n_eval = 300;
  cfg.seed = 9;
  const std::vector<double> x = {5.0, 0.0};  // deep inside class 1
  CHECK_FALSE(local_fidelity(box, ramp(), x, 0.5, cfg).has_value());
}

TEST_CASE("singleton radius sweep equals a direct evaluation") {
  const auto data = generate_half_moons(80, 0.2, 3);
  const AffineBox box(ramp());
  const std::vector<double> x = {0.1, 0.2};
  FidelityConfig cfg;
  cfg.n_eval = 400;
  cfg.seed = 42;

  const std::vector<double> fractions = {0.25};
  const auto sweep = radius_sweep(box, ramp(), x, data, fractions, cfg);
  REQUIRE(sweep.size() == 1);
  CHECK(sweep[0].first == 0.25);

  FidelityConfig direct = cfg;
  direct.seed = rng::derive_seed(cfg.seed, rng::StreamTag::sweep, 0);
  const auto want = local_fidelity(box, ramp(), x, relative_radius(data, x, 0.25), direct);
  REQUIRE(sweep[0].second.has_value() == want.has_value());
  if (want.has_value()) CHECK(*sweep[0].second == *want);
}

TEST_CASE("dataset fidelity aggregates per-instance scores") {
  const auto data = generate_half_moons(60, 0.25, 19);
  const auto [train, test] = train_test_split(data, 0.25, 19);
  const auto model = make_halfspace_oracle({0.0, 1.0}, -0.25);

  ExplainerConfig explainer;
  explainer.method = Method::lime;
  explainer.n_samples = 600;
  explainer.seed = 4;
  FidelityConfig fid;
  fid.r_fid_fraction = 0.3;
  fid.n_eval = 300;
  fid.seed = 4;

  const auto report = dataset_fidelity(*model, explainer, test, train, fid);
  CHECK(report.method == Method::lime);
  CHECK(report.r_fid_fraction == 0.3);
  CHECK(report.n_eval == 300);
  REQUIRE(report.per_instance.size() == test.n_rows());

  double sum = 0.0, sum_sq = 0.0;
  std::size_t scored = 0, skipped = 0;
  for (const auto& inst : report.per_instance) {
    if (inst.score.has_value()) {
      CHECK(*inst.score >= 0.0);
      CHECK(*inst.score <= 1.0);
      sum += *inst.score;
      sum_sq += *inst.score * *inst.score;
      ++scored;
    } else {
      CHECK_FALSE(inst.skip_reason.empty());
      ++skipped;
    }
  }
  CHECK(report.n_skipped == skipped);
  REQUIRE(report.mean.has_value());
  const double mean = sum / static_cast<double>(scored);
  CHECK(*report.mean == doctest::Approx(mean).epsilon(1e-12));
  CHECK(*report.std_dev ==
        doctest::Approx(std::sqrt(std::max(0.0, sum_sq / scored - mean * mean))).epsilon(1e-9));

  const auto again = dataset_fidelity(*model, explainer, test, train, fid);
  REQUIRE(again.mean.has_value());
  CHECK(*again.mean == *report.mean);  // bit-identical rerun
}

TEST_CASE("a single evaluated instance yields its own score and zero spread") {
  const auto data = generate_half_moons(40, 0.2, 8);
  Dataset one(2, {"x0", "x1"});
  one.add_row(data.row(0), data.label(0));

  const auto model = make_halfspace_oracle({0.0, 1.0}, -0.25);
  ExplainerConfig explainer;
  explainer.method = Method::lime;
  explainer.n_samples = 500;
  explainer.seed = 6;
  FidelityConfig fid;
  fid.r_fid_fraction = 0.5;
  fid.n_eval = 200;
  fid.seed = 6;

  const auto report = dataset_fidelity(*model, explainer, one, data, fid);
  REQUIRE(report.per_instance.size() == 1);
  REQUIRE(report.per_instance[0].score.has_value());
  REQUIRE(report.mean.has_value());
  CHECK(*report.mean == *report.per_instance[0].score);
  CHECK(*report.std_dev == 0.0);
  CHECK(report.n_skipped == 0);
}
