#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "sgnnlab/grbfnn.hpp"

using namespace sgnn;

namespace {

Matrix random_batch(std::size_t rows, std::size_t dim, double lo, double hi, Rng& rng) {
  Matrix x(rows, dim);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < dim; ++c) x(r, c) = rng.uniform(lo, hi);
  return x;
}

}  // namespace

TEST_CASE("design matrix holds isotropic unit responses") {
  Matrix centers(2, 2);
  centers(0, 0) = 0.0;
  centers(0, 1) = 0.0;
  centers(1, 0) = 1.0;
  centers(1, 1) = -1.0;
  const GrbfnnModel m(centers, Vector{1.0, 2.0}, Vector{0.5, -0.5});

  Matrix x(1, 2);
  x(0, 0) = 1.0;
  x(0, 1) = 1.0;
  const Matrix d = m.design_matrix(x);
  CHECK(d(0, 0) == doctest::Approx(std::exp(-2.0 / 2.0)));  // ||x||^2 = 2, sigma 1
  CHECK(d(0, 1) == doctest::Approx(std::exp(-4.0 / 8.0)));  // dist^2 = 4, sigma 2

  const Vector out = m.predict(x);
  CHECK(out[0] == doctest::Approx(0.5 * d(0, 0) - 0.5 * d(0, 1)));
}

TEST_CASE("parameter layout and counts") {
  Rng rng(5);
  GrbfnnModel m(3, 4, -8.0, 8.0, rng);
  CHECK(m.param_count() == 4 * (3 + 2));
  const Vector p = m.params();
  REQUIRE(p.size() == 20);
  // weights first, then centers row-major, then widths
  CHECK(p[0] == m.weights()[0]);
  CHECK(p[4] == m.centers()(0, 0));
  CHECK(p[4 + 3] == m.centers()(1, 0));
  CHECK(p[16] == m.widths()[0]);

  Vector q = p;
  for (double& v : q) v += 0.125;
  m.set_params(q);
  CHECK(m.params() == q);
  CHECK_THROWS_AS(m.set_params(Vector(p.size() + 1)), std::invalid_argument);
}

TEST_CASE("constructor guards") {
  Rng rng(7);
  CHECK_THROWS_AS(GrbfnnModel(0, 3, -1.0, 1.0, rng), std::invalid_argument);
  CHECK_THROWS_AS(GrbfnnModel(2, 0, -1.0, 1.0, rng), std::invalid_argument);
  CHECK_THROWS_AS(GrbfnnModel(2, 3, 1.0, 1.0, rng), std::invalid_argument);
  CHECK_THROWS_AS(GrbfnnModel(Matrix(2, 2), Vector{1.0}, Vector{1.0, 1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(GrbfnnModel(Matrix(2, 2), Vector{1.0, 0.0}, Vector{1.0, 1.0}),
                  std::invalid_argument);
}

TEST_CASE("post_update clamps widths from below") {
  Rng rng(11);
  GrbfnnModel m(2, 2, -1.0, 1.0, rng);
  Vector p = m.params();
  p[p.size() - 1] = -3.0;
  m.set_params(p);
  m.post_update();
  CHECK(m.widths()[1] == doctest::Approx(GrbfnnModel::kSigmaMin));
}

TEST_CASE("analytic gradients match central differences") {
  Rng rng(13);
  for (const std::size_t d : {1, 2, 3}) {
    const GrbfnnModel m(d, 4, -2.0, 2.0, rng);
    const Matrix x = random_batch(5, d, -2.0, 2.0, rng);
    Vector og(5);
    for (double& v : og) v = rng.uniform(-1.0, 1.0);

    const GrbfnnForward fwd = m.forward(x);
    const Vector analytic = m.backward_flat(x, fwd, og);
    REQUIRE(analytic.size() == m.param_count());

    const auto objective = [&](const Vector& p) {
      GrbfnnModel scratch = m;
      scratch.set_params(p);
      const Vector out = scratch.predict(x);
      double s = 0.0;
      for (std::size_t r = 0; r < out.size(); ++r) s += og[r] * out[r];
      return s;
    };
    const Vector numeric = oracle::fd_gradient(objective, m.params(), 1e-5);
    for (std::size_t i = 0; i < analytic.size(); ++i) {
      const double scale = std::max({1.0, std::abs(analytic[i]), std::abs(numeric[i])});
      CHECK(std::abs(analytic[i] - numeric[i]) / scale < 1e-7);
    }
    CHECK(m.backward(x, fwd, og).flatten() == analytic);
  }
}

TEST_CASE("expansion indexes tuples least-significant-first") {
  Rng rng(17);
  const SgnnModel m(3, 2, -4.0, 4.0, rng);
  const AnisotropicGrbfnn g = sgnn_to_grbfnn(m);
  REQUIRE(g.units() == 8);
  REQUIRE(g.dim() == 3);

  // tuple (1,1,1) lands at j = 1 + 1*2 + 1*4 = 7
  CHECK(g.centers()(7, 0) == m.centers(0)[1]);
  CHECK(g.centers()(7, 1) == m.centers(1)[1]);
  CHECK(g.centers()(7, 2) == m.centers(2)[1]);
  CHECK(g.widths()(7, 0) == m.sigmas(0)[1]);
  CHECK(g.widths()(7, 2) == m.sigmas(2)[1]);
  CHECK(g.weights()[7] == doctest::Approx(m.weight(1)(1, 1) * m.weight(0)(1, 1)));

  // tuple (1,0,0) lands at j = 1
  CHECK(g.centers()(1, 0) == m.centers(0)[1]);
  CHECK(g.centers()(1, 1) == m.centers(1)[0]);
  CHECK(g.weights()[1] == doctest::Approx(m.weight(1)(0, 0) * m.weight(0)(0, 1)));
}

TEST_CASE("expansion reproduces the network it came from") {
  Rng rng(19);
  for (const std::size_t d : {2, 3, 4}) {
    const SgnnModel m(d, 3, -8.0, 8.0, rng);
    const AnisotropicGrbfnn g = sgnn_to_grbfnn(m);
    const Matrix x = random_batch(6, d, -8.0, 8.0, rng);
    const Vector want = m.predict(x);
    const Vector got = g.predict(x);
    for (std::size_t r = 0; r < want.size(); ++r) {
      const double scale = std::max({1.0, std::abs(want[r]), std::abs(got[r])});
      CHECK(std::abs(want[r] - got[r]) / scale < 1e-12);
    }
    // and both agree with the direct tensor expansion
    for (std::size_t r = 0; r < 3; ++r) {
      CHECK(got[r] == doctest::Approx(oracle::brute_force_output(m, x.row(r))).epsilon(1e-12));
    }
  }
}

TEST_CASE("expansion guards") {
  Rng rng(23);
  const SgnnModel flat(1, 4, -1.0, 1.0, rng);
  CHECK_THROWS_AS(sgnn_to_grbfnn(flat), std::invalid_argument);
  const SgnnModel big(4, 5, -1.0, 1.0, rng);  // 625 units
  CHECK_THROWS_AS(sgnn_to_grbfnn(big, 100), std::runtime_error);
}

TEST_CASE("anisotropic predict is design times weights") {
  Rng rng(29);
  const SgnnModel m(2, 3, -3.0, 3.0, rng);
  const AnisotropicGrbfnn g = sgnn_to_grbfnn(m);
  const Matrix x = random_batch(4, 2, -3.0, 3.0, rng);
  const Matrix design = g.design_matrix(x);
  const Vector out = g.predict(x);
  for (std::size_t r = 0; r < 4; ++r) {
    double s = 0.0;
    for (std::size_t k = 0; k < g.units(); ++k) s += design(r, k) * g.weights()[k];
    CHECK(out[r] == doctest::Approx(s));
  }
  CHECK_THROWS_AS(AnisotropicGrbfnn(Matrix(2, 2), Matrix(2, 3), Vector{1.0, 1.0}),
                  std::invalid_argument);
}
