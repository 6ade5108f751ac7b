#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "sgnnlab/candidates.hpp"

using namespace sgnn;

TEST_CASE("construction guards") {
  CHECK_THROWS_AS(make_candidate(0, 2), std::invalid_argument);
  CHECK_THROWS_AS(make_candidate(11, 2), std::invalid_argument);
  CHECK_THROWS_AS(make_candidate(1, 1), std::invalid_argument);
  const CandidateFunction f = make_candidate(1, 3);
  CHECK(f.id() == 1);
  CHECK(f.dim() == 3);
  CHECK_THROWS_AS(f(Vector{1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("frozen point values") {
  // f1: root sum squared
  CHECK(make_candidate(1, 2)(Vector{3.0, 4.0}) == doctest::Approx(5.0));
  // f2: (x1^2 x2 + x2^2 x1)/50 with the cyclic wrap
  CHECK(make_candidate(2, 2)(Vector{1.0, 2.0}) == doctest::Approx(6.0 / 50.0));
  // f3: sum of exp(x^2/50)/5
  CHECK(make_candidate(3, 2)(Vector{0.0, 0.0}) == doctest::Approx(0.4));
  // f4: y_j cycles, y_d = x1
  CHECK(make_candidate(4, 2)(Vector{0.0, std::asin(1.0)}) == doctest::Approx(0.2));
  // f5 at (8, 8): (64 cos 8 + 64 cos 16)/50
  CHECK(make_candidate(5, 2)(Vector{8.0, 8.0}) ==
        doctest::Approx(-1.4120441780889577).epsilon(1e-12));
  // f6 at origin: 10/(1+1)
  CHECK(make_candidate(6, 2)(Vector{0.0, 0.0}) == doctest::Approx(5.0));
  CHECK(make_candidate(6, 2)(Vector{5.0, 0.0}) ==
        doctest::Approx(2.6894142136999512).epsilon(1e-12));
  // f7 at origin: 10/(1+e^0)
  CHECK(make_candidate(7, 3)(Vector{0.0, 0.0, 0.0}) == doctest::Approx(5.0));
  // f8 peaks at 10, decays with the squared radius over every coordinate
  CHECK(make_candidate(8, 2)(Vector{0.0, 0.0}) == doctest::Approx(10.0));
  CHECK(make_candidate(8, 2)(Vector{10.0, 0.0}) ==
        doctest::Approx(3.6787944117144233).epsilon(1e-12));
  // f9 linear, f10 constant
  CHECK(make_candidate(9, 4)(Vector{1.0, 2.0, 3.0, 4.0}) == doctest::Approx(10.0));
  CHECK(make_candidate(10, 5)(Vector{3.0, -1.0, 0.0, 9.0, 2.0}) == 1.0);
}

TEST_CASE("structural properties") {
  // f2 wraps the index: last term uses x1
  const CandidateFunction f2 = make_candidate(2, 3);
  const double direct = (1.0 * 1.0 * 2.0 + 2.0 * 2.0 * 3.0 + 3.0 * 3.0 * 1.0) / 50.0;
  CHECK(f2(Vector{1.0, 2.0, 3.0}) == doctest::Approx(direct));

  // f5 weights the cosine argument by the 1-based coordinate index
  const CandidateFunction f5 = make_candidate(5, 3);
  const double x = 1.3;
  const double expect =
      (x * x * std::cos(x) + x * x * std::cos(2 * x) + x * x * std::cos(3 * x)) / 50.0;
  CHECK(f5(Vector{x, x, x}) == doctest::Approx(expect));

  // f7 saturates toward 0 and 10
  const CandidateFunction f7 = make_candidate(7, 2);
  CHECK(f7(Vector{60.0, 60.0}) == doctest::Approx(10.0).epsilon(1e-6));
  CHECK(f7(Vector{-60.0, -60.0}) == doctest::Approx(0.0).epsilon(1e-6));

  // f1 and f8 are radially symmetric
  CHECK(make_candidate(1, 2)(Vector{3.0, 4.0}) ==
        doctest::Approx(make_candidate(1, 2)(Vector{4.0, 3.0})));
  CHECK(make_candidate(8, 2)(Vector{1.0, 2.0}) ==
        doctest::Approx(make_candidate(8, 2)(Vector{2.0, 1.0})));
}

TEST_CASE("dataset sampling splits and determinism") {
  Rng rng(11);
  const CandidateFunction f = make_candidate(3, 2);
  const Dataset ds = sample_dataset(f, 1000, -8.0, 8.0, 0.8, rng);
  CHECK(ds.size() == 1000);
  CHECK(ds.dim() == 2);
  CHECK(ds.train_idx.size() == 800);
  CHECK(ds.val_idx.size() == 200);

  // disjoint union of all indices
  std::set<std::size_t> seen(ds.train_idx.begin(), ds.train_idx.end());
  seen.insert(ds.val_idx.begin(), ds.val_idx.end());
  CHECK(seen.size() == 1000);
  CHECK(*seen.rbegin() == 999);

  // inputs stay inside the box and targets match the function
  for (std::size_t i = 0; i < ds.size(); ++i) {
    CHECK(ds.inputs(i, 0) >= -8.0);
    CHECK(ds.inputs(i, 0) < 8.0);
    CHECK(ds.targets[i] == doctest::Approx(f(ds.inputs.row(i))));
  }

  Rng rng2(11);
  const Dataset repeat = sample_dataset(f, 1000, -8.0, 8.0, 0.8, rng2);
  CHECK(repeat.inputs(0, 0) == ds.inputs(0, 0));
  CHECK(repeat.train_idx == ds.train_idx);

  // 16384-sample split rounds to the nearest integer
  Rng rng3(1);
  const Dataset big = sample_dataset(f, 16384, -8.0, 8.0, 0.8, rng3);
  CHECK(big.train_idx.size() == 13107);
  CHECK(big.val_idx.size() == 3277);

  CHECK_THROWS_AS(sample_dataset(f, 5, -8.0, 8.0, 0.8, rng), std::invalid_argument);
  CHECK_THROWS_AS(sample_dataset(f, 100, 8.0, -8.0, 0.8, rng), std::invalid_argument);
}

TEST_CASE("gather helpers") {
  Matrix m(3, 2);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 2; ++j) m(i, j) = static_cast<double>(10 * i + j);
  const std::vector<std::size_t> idx{2, 0};
  const Matrix rows = gather_rows(m, idx);
  CHECK(rows.rows() == 2);
  CHECK(rows(0, 1) == 21.0);
  CHECK(rows(1, 0) == 0.0);
  const Vector vals = gather(Vector{5.0, 6.0, 7.0}, idx);
  CHECK(vals == Vector{7.0, 5.0});
}

TEST_CASE("grid_slice fixes trailing coordinates at zero") {
  const CandidateFunction f9 = make_candidate(9, 3);
  const Matrix g = grid_slice(f9, 3, -1.0, 1.0);
  REQUIRE(g.rows() == 3);
  REQUIRE(g.cols() == 3);
  CHECK(g(0, 0) == doctest::Approx(-2.0));  // x = (-1, -1, 0)
  CHECK(g(0, 1) == doctest::Approx(-1.0));  // x = (-1, 0, 0)
  CHECK(g(2, 2) == doctest::Approx(2.0));
  CHECK(g(1, 1) == doctest::Approx(0.0));

  const Matrix ones = grid_slice(make_candidate(10, 2), 4, -8.0, 8.0);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) CHECK(ones(i, j) == 1.0);

  CHECK_THROWS_AS(grid_slice(f9, 1, -1.0, 1.0), std::invalid_argument);
}
