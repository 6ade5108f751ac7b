#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "sgnnlab/linalg.hpp"

using namespace sgnn;

TEST_CASE("matrix basics") {
  Matrix m(2, 3, 1.5);
  CHECK(m.rows() == 2);
  CHECK(m.cols() == 3);
  CHECK(m.size() == 6);
  CHECK(m(1, 2) == 1.5);
  m(0, 1) = -2.0;
  CHECK(m.row(0)[1] == -2.0);

  const Matrix eye = Matrix::identity(3);
  CHECK(eye(0, 0) == 1.0);
  CHECK(eye(0, 1) == 0.0);
  CHECK(m.same_shape(Matrix(2, 3)));
  CHECK_FALSE(m.same_shape(eye));
}

TEST_CASE("matmul and transpose") {
  Matrix a(2, 3);
  Matrix b(3, 2);
  int v = 0;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 3; ++j) a(i, j) = ++v;
  v = 0;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 2; ++j) b(i, j) = ++v;

  const Matrix c = matmul(a, b);  // [[22,28],[49,64]]
  CHECK(c.rows() == 2);
  CHECK(c.cols() == 2);
  CHECK(c(0, 0) == doctest::Approx(22));
  CHECK(c(0, 1) == doctest::Approx(28));
  CHECK(c(1, 0) == doctest::Approx(49));
  CHECK(c(1, 1) == doctest::Approx(64));

  const Matrix at = transpose(a);
  CHECK(at.rows() == 3);
  CHECK(at(2, 1) == a(1, 2));

  CHECK_THROWS_AS(matmul(a, a), std::invalid_argument);

  const Vector y = matvec(a, Vector{1.0, 0.0, -1.0});
  CHECK(y[0] == doctest::Approx(1.0 - 3.0));
  CHECK(y[1] == doctest::Approx(4.0 - 6.0));
}

TEST_CASE("norms") {
  Matrix m(2, 2);
  m(0, 0) = 3.0;
  m(1, 1) = -4.0;
  CHECK(frobenius_norm(m) == doctest::Approx(5.0));
  CHECK(max_abs(m) == doctest::Approx(4.0));
  CHECK(euclidean_norm(Vector{3.0, 4.0}) == doctest::Approx(5.0));
}

TEST_CASE("sym_eigen on a 2x2 with known spectrum") {
  Matrix h(2, 2);
  h(0, 0) = 2.0;
  h(0, 1) = 1.0;
  h(1, 0) = 1.0;
  h(1, 1) = 2.0;
  const EigenDecomposition eig = sym_eigen(h);
  REQUIRE(eig.eigenvalues.size() == 2);
  CHECK(eig.eigenvalues[0] == doctest::Approx(3.0));
  CHECK(eig.eigenvalues[1] == doctest::Approx(1.0));
  // eigenvector of 3 is (1,1)/sqrt(2) up to sign
  CHECK(std::abs(eig.eigenvectors(0, 0)) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(eig.eigenvectors(0, 0) == doctest::Approx(eig.eigenvectors(1, 0)));
}

TEST_CASE("sym_eigen reconstructs random symmetric matrices") {
  Rng rng(42);
  const std::size_t n = 6;
  Matrix h(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      h(i, j) = rng.uniform(-1.0, 1.0);
      h(j, i) = h(i, j);
    }
  }
  const EigenDecomposition eig = sym_eigen(h);

  // descending order
  for (std::size_t i = 0; i + 1 < n; ++i) CHECK(eig.eigenvalues[i] >= eig.eigenvalues[i + 1]);

  // columns orthonormal
  const Matrix vtv = matmul(transpose(eig.eigenvectors), eig.eigenvectors);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      CHECK(vtv(i, j) == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-10));
    }
  }

  // h = V diag(l) V^T
  Matrix vl = eig.eigenvectors;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) vl(i, j) *= eig.eigenvalues[j];
  }
  const Matrix rebuilt = matmul(vl, transpose(eig.eigenvectors));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      CHECK(rebuilt(i, j) == doctest::Approx(h(i, j)).epsilon(1e-10));
    }
  }
}

TEST_CASE("sym_eigen rejects bad input") {
  Matrix rect(2, 3);
  CHECK_THROWS_AS(sym_eigen(rect), std::invalid_argument);
  Matrix skew(2, 2);
  skew(0, 1) = 1.0;
  skew(1, 0) = -1.0;
  CHECK_THROWS_AS(sym_eigen(skew), std::invalid_argument);
}

TEST_CASE("rng streams are deterministic and well ranged") {
  Rng a(123);
  Rng b(123);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

  Rng r(7);
  for (int i = 0; i < 1000; ++i) {
    const double u = r.next_double();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  for (int i = 0; i < 1000; ++i) {
    const double u = r.uniform(-3.0, 2.0);
    CHECK(u >= -3.0);
    CHECK(u < 2.0);
  }
  CHECK_THROWS_AS(r.uniform(1.0, 1.0), std::invalid_argument);

  for (int i = 0; i < 200; ++i) {
    const std::size_t k = r.below(7);
    CHECK(k < 7);
  }
}

TEST_CASE("rng normal has sane moments") {
  Rng r(99);
  const int n = 20000;
  double mean = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = r.normal();
    mean += z;
    sq += z * z;
  }
  mean /= n;
  sq /= n;
  CHECK(std::abs(mean) < 0.03);
  CHECK(std::abs(sq - 1.0) < 0.05);
}

TEST_CASE("shuffle is a permutation and seed-stable") {
  Rng a(5);
  std::vector<int> items{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  a.shuffle(items);
  CHECK(std::set<int>(items.begin(), items.end()).size() == 10);

  Rng b(5);
  std::vector<int> again{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  b.shuffle(again);
  CHECK(items == again);
}

TEST_CASE("derived seeds differ by tag and stay stable") {
  const std::uint64_t s1 = Rng::derive(1, 10);
  const std::uint64_t s2 = Rng::derive(1, 11);
  const std::uint64_t s3 = Rng::derive(2, 10);
  CHECK(s1 != s2);
  CHECK(s1 != s3);
  CHECK(s1 == Rng::derive(1, 10));
}
