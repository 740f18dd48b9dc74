#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "surrex/blackbox.hpp"
#include "surrex/error.hpp"
#include "surrex/forest.hpp"
#include "surrex/rng.hpp"
#include "surrex/tabular.hpp"

using namespace surrex;

namespace {

// Two well-separated Gaussian blobs, one per class.
Dataset separable_blobs(std::size_t n, std::uint64_t seed) {
  rng::Stream s(seed);
  Dataset d(2, {"x0", "x1"});
  for (std::size_t i = 0; i < n; ++i) {
    const int label = static_cast<int>(i % 2);
    const double cx = label == 0 ? -2.0 : 2.0;
    const double p[2] = {cx + 0.5 * s.next_gaussian(), 0.5 * s.next_gaussian()};
    d.add_row(p, label);
  }
  return d;
}

}  // namespace

TEST_CASE("halfspace oracle thresholds with ties to class 1") {
  const auto m = make_halfspace_oracle({1.0, -2.0}, 0.5);
  CHECK(m->dimension() == 2);
  CHECK(m->label(std::vector<double>{1.0, 0.0}) == 1);   // 1 + 0.5 > 0
  CHECK(m->label(std::vector<double>{-1.0, 0.0}) == 0);  // -0.5 < 0
  CHECK(m->label(std::vector<double>{-0.5, 0.0}) == 1);  // exactly on the boundary
  CHECK(m->score(std::vector<double>{1.0, 0.0}) == 1.0);
  CHECK(m->score(std::vector<double>{-1.0, 0.0}) == 0.0);
  CHECK_THROWS_AS(make_halfspace_oracle({0.0, 0.0}, 1.0), Error);
}

TEST_CASE("ball and checkerboard oracles") {
  const auto ball = make_ball_oracle({1.0, 1.0}, 2.0);
  CHECK(ball->label(std::vector<double>{1.0, 1.0}) == 1);
  CHECK(ball->label(std::vector<double>{3.0, 1.0}) == 1);  // on the sphere
  CHECK(ball->label(std::vector<double>{3.1, 1.0}) == 0);

  const auto grid = make_checkerboard_oracle(2, 1.0);
  CHECK(grid->label(std::vector<double>{0.5, 0.5}) == 0);  // floor sum 0
  CHECK(grid->label(std::vector<double>{1.5, 0.5}) == 1);
  CHECK(grid->label(std::vector<double>{1.5, 1.5}) == 0);
  CHECK(grid->label(std::vector<double>{-0.5, 0.5}) == 1);  // floor(-0.5) = -1
}

TEST_CASE("score_batch equals per-row scoring") {
  const auto m = make_halfspace_oracle({1.0, 1.0}, 0.0);
  RowMatrix xs(4, 2);
  rng::Stream s(3);
  for (std::size_t i = 0; i < 4; ++i)
    for (auto& v : xs.row(i)) v = s.next_uniform(-1.0, 1.0);
  const auto scores = score_batch(*m, xs);
  REQUIRE(scores.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) CHECK(scores[i] == m->score(xs.row(i)));
}

TEST_CASE("random forest separates blobs and scores on the vote grid") {
  const auto data = separable_blobs(200, 17);
  RandomForestParams params;
  params.n_trees = 25;
  params.seed = 5;
  const auto rf = train_random_forest(data, params);
  CHECK(rf.n_trees() == 25);

  std::size_t correct = 0;
  rng::Stream s(99);
  for (int i = 0; i < 100; ++i) {
    const int label = i % 2;
    const std::vector<double> x = {label == 0 ? -2.0 : 2.0, s.next_gaussian() * 0.3};
    correct += rf.label(x) == label ? 1u : 0u;
    const double v = rf.score(x) * 25.0;
    CHECK(v == doctest::Approx(std::round(v)).epsilon(1e-9));  // vote fraction k/25
  }
  CHECK(correct >= 95);
}

TEST_CASE("random forest training is deterministic per seed") {
  const auto data = separable_blobs(120, 21);
  RandomForestParams params;
  params.n_trees = 10;
  params.seed = 7;
  const auto a = train_random_forest(data, params);
  const auto b = train_random_forest(data, params);
  params.seed = 8;
  const auto c = train_random_forest(data, params);

  bool identical = true, differs = false;
  rng::Stream s(1);
  for (int i = 0; i < 200; ++i) {
    const std::vector<double> x = {s.next_uniform(-3.0, 3.0), s.next_uniform(-2.0, 2.0)};
    identical &= (a.score(x) == b.score(x));
    differs |= (a.score(x) != c.score(x));
  }
  CHECK(identical);
  CHECK(differs);
}

TEST_CASE("random forest serialization round-trips") {
  const auto data = separable_blobs(80, 33);
  RandomForestParams params;
  params.n_trees = 8;
  params.max_depth = 4;
  params.seed = 2;
  const auto rf = train_random_forest(data, params);

  const auto path = std::filesystem::temp_directory_path() / "surrex-forest-roundtrip.json";
  rf.save(path);
  const auto loaded = RandomForest::load(path);
  CHECK(loaded.n_trees() == rf.n_trees());
  CHECK(loaded.dimension() == rf.dimension());

  rng::Stream s(4);
  for (int i = 0; i < 200; ++i) {
    const std::vector<double> x = {s.next_uniform(-3.0, 3.0), s.next_uniform(-2.0, 2.0)};
    CHECK(loaded.score(x) == rf.score(x));
  }
}

TEST_CASE("random forest rejects degenerate training input") {
  Dataset one_class(1, {"a"});
  one_class.add_row(std::vector<double>{0.0}, 1);
  one_class.add_row(std::vector<double>{1.0}, 1);
  RandomForestParams params;
  params.n_trees = 2;
  try {
    train_random_forest(one_class, params);
    FAIL("expected invalid-argument error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::invalid_argument);
  }

  params.n_trees = 0;
  CHECK_THROWS_AS(train_random_forest(separable_blobs(10, 1), params), Error);
}
