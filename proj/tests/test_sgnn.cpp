#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "sgnnlab/sgnn.hpp"

using namespace sgnn;

namespace {

Matrix random_batch(std::size_t rows, std::size_t dim, double lo, double hi, Rng& rng) {
  Matrix x(rows, dim);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < dim; ++c) x(r, c) = rng.uniform(lo, hi);
  return x;
}

}  // namespace

TEST_CASE("gaussian activation values and guard") {
  CHECK(gaussian_activation(0.0, 0.0, 1.0) == doctest::Approx(1.0));
  CHECK(gaussian_activation(1.0, 0.0, 1.0) == doctest::Approx(std::exp(-0.5)));
  CHECK(gaussian_activation(3.0, 0.0, 1.0) == doctest::Approx(std::exp(-4.5)));
  CHECK(gaussian_activation(2.0, 2.0, 0.3) == doctest::Approx(1.0));
  CHECK_THROWS_AS(gaussian_activation(0.0, 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(gaussian_activation(0.0, 0.0, -1.0), std::invalid_argument);
}

TEST_CASE("initial centers are evenly spaced with matching widths") {
  Rng rng(3);
  const SgnnModel m(2, 5, -8.0, 8.0, rng);
  const Vector expected{-8.0, -4.0, 0.0, 4.0, 8.0};
  for (std::size_t l = 0; l < 2; ++l) {
    REQUIRE(m.centers(l).size() == 5);
    for (std::size_t i = 0; i < 5; ++i) {
      CHECK(m.centers(l)[i] == doctest::Approx(expected[i]));
      CHECK(m.sigmas(l)[i] == doctest::Approx(4.0));
    }
  }
  // weight entries live in [-1/sqrt(N_in), 1/sqrt(N_in)]
  const double bound = 1.0 / std::sqrt(5.0);
  const Matrix& w = m.weight(0);
  for (std::size_t i = 0; i < w.rows(); ++i) {
    for (std::size_t j = 0; j < w.cols(); ++j) {
      CHECK(w(i, j) >= -bound);
      CHECK(w(i, j) <= bound);
    }
  }

  Rng rng2(3);
  const SgnnModel single(std::vector<std::size_t>{1, 3}, -8.0, 8.0, rng2);
  CHECK(single.centers(0)[0] == doctest::Approx(0.0));  // midpoint
  CHECK(single.sigmas(0)[0] == doctest::Approx(8.0));   // half the box
}

TEST_CASE("parameter counts and flat layout round-trip") {
  Rng rng(17);
  const SgnnModel d1(1, 3, -8.0, 8.0, rng);
  CHECK(d1.param_count() == 9);  // N weights + N centers + N sigmas
  const SgnnModel d2(2, 10, -8.0, 8.0, rng);
  CHECK(d2.param_count() == 140);
  const SgnnModel d5(5, 20, -8.0, 8.0, rng);
  CHECK(d5.param_count() == 1800);

  SgnnModel m(3, 4, -8.0, 8.0, rng);
  const Vector p = m.params();
  REQUIRE(p.size() == m.param_count());
  Vector q = p;
  for (double& v : q) v += 0.25;
  m.set_params(q);
  CHECK(m.params() == q);
  m.set_params(p);
  CHECK(m.params() == p);
  CHECK_THROWS_AS(m.set_params(Vector(p.size() - 1)), std::invalid_argument);

  // weight block leads: perturbing entry 0 changes W^1(0,0)
  q = p;
  q[0] += 1.0;
  m.set_params(q);
  CHECK(m.weight(0)(0, 0) == doctest::Approx(p[0] + 1.0));
}

TEST_CASE("forward matches the brute-force tensor expansion") {
  Rng rng(23);
  for (const std::size_t d : {1, 2, 3, 4}) {
    const std::size_t n = 2 + rng.below(3);
    const SgnnModel m(d, n, -6.0, 6.0, rng);
    const Matrix x = random_batch(5, d, -6.0, 6.0, rng);
    const SgnnForward fwd = m.forward(x);
    REQUIRE(fwd.outputs.size() == 5);
    for (std::size_t r = 0; r < 5; ++r) {
      const double expect = oracle::brute_force_output(m, x.row(r));
      CHECK(fwd.outputs[r] == doctest::Approx(expect).epsilon(1e-12));
    }
    CHECK(m.predict(x) == fwd.outputs);
  }
}

TEST_CASE("heterogeneous layer sizes also match the oracle") {
  Rng rng(29);
  const SgnnModel m(std::vector<std::size_t>{2, 4, 3}, -5.0, 5.0, rng);
  CHECK(m.param_count() == (4 * 2 + 3 * 4) + 2 * (2 + 4 + 3));
  const Matrix x = random_batch(4, 3, -5.0, 5.0, rng);
  const Vector out = m.predict(x);
  for (std::size_t r = 0; r < 4; ++r) {
    CHECK(out[r] == doctest::Approx(oracle::brute_force_output(m, x.row(r))).epsilon(1e-12));
  }
}

TEST_CASE("output equals the sum of the last mixed layer") {
  Rng rng(31);
  const SgnnModel m(3, 3, -8.0, 8.0, rng);
  const Matrix x = random_batch(3, 3, -8.0, 8.0, rng);
  const SgnnForward fwd = m.forward(x);
  REQUIRE(fwd.layer_outputs.size() == 3);
  for (std::size_t r = 0; r < 3; ++r) {
    double s = 0.0;
    for (double v : fwd.layer_outputs.back().row(r)) s += v;
    CHECK(fwd.outputs[r] == doctest::Approx(s));
  }
  REQUIRE(fwd.activations.size() == 3);
  CHECK(fwd.activations[0].rows() == 3);
  CHECK(fwd.activations[0].cols() == 3);
}

TEST_CASE("analytic gradients match central differences") {
  Rng rng(41);
  for (const std::size_t d : {1, 2, 3}) {
    const SgnnModel m(d, 3, -2.0, 2.0, rng);
    const Matrix x = random_batch(4, d, -2.0, 2.0, rng);
    Vector og(4);
    for (double& v : og) v = rng.uniform(-1.0, 1.0);

    const SgnnForward fwd = m.forward(x);
    const Vector analytic = m.backward_flat(x, fwd, og);
    REQUIRE(analytic.size() == m.param_count());

    const auto objective = [&](const Vector& p) {
      SgnnModel scratch = m;
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
  }
}

TEST_CASE("structured gradients flatten in parameter order") {
  Rng rng(43);
  const SgnnModel m(2, 3, -2.0, 2.0, rng);
  const Matrix x = random_batch(3, 2, -2.0, 2.0, rng);
  const Vector og{0.3, -0.7, 1.1};
  const SgnnForward fwd = m.forward(x);
  const SgnnGradients grads = m.backward(x, fwd, og);
  const Vector flat = m.backward_flat(x, fwd, og);
  CHECK(grads.flatten() == flat);
  CHECK(grads.d_weights.size() == 1);
  CHECK(grads.d_centers.size() == 2);
  CHECK(grads.d_sigmas.size() == 2);
  CHECK(flat[0] == grads.d_weights[0](0, 0));
}

TEST_CASE("post_update clamps widths from below") {
  Rng rng(47);
  SgnnModel m(2, 2, -1.0, 1.0, rng);
  Vector p = m.params();
  p[p.size() - 1] = -0.5;  // last sigma
  m.set_params(p);
  m.post_update();
  CHECK(m.sigmas(1)[1] == doctest::Approx(SgnnModel::kSigmaMin));
}

TEST_CASE("shape guards") {
  Rng rng(53);
  const SgnnModel m(2, 3, -1.0, 1.0, rng);
  CHECK_THROWS_AS(m.forward(Matrix(2, 3)), std::invalid_argument);
  const Matrix x = random_batch(2, 2, -1.0, 1.0, rng);
  const SgnnForward fwd = m.forward(x);
  CHECK_THROWS_AS(m.backward(x, fwd, Vector{1.0}), std::invalid_argument);
  const Matrix other = random_batch(3, 2, -1.0, 1.0, rng);
  CHECK_THROWS_AS(m.backward(other, fwd, Vector{1.0, 1.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(SgnnModel(0, 3, -1.0, 1.0, rng), std::invalid_argument);
  CHECK_THROWS_AS(SgnnModel(2, 0, -1.0, 1.0, rng), std::invalid_argument);
  CHECK_THROWS_AS(SgnnModel(2, 3, 1.0, -1.0, rng), std::invalid_argument);
}
