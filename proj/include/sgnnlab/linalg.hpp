#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace sgnn {

using Vector = std::vector<double>;

/// Dense row-major matrix of 64-bit reals.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);

  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  bool same_shape(const Matrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  Vector data_;
};

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& m);
Vector matvec(const Matrix& a, std::span<const double> x);

double frobenius_norm(const Matrix& m);
double euclidean_norm(std::span<const double> v);
double max_abs(const Matrix& m);

struct EigenDecomposition {
  Vector eigenvalues;   // sorted descending
  Matrix eigenvectors;  // columns, orthonormal: h = V diag(l) V^T
};

/// Symmetric eigendecomposition by cyclic Jacobi rotations.
/// Throws if the input is non-square or asymmetric beyond 1e-9 * max|entry|.
EigenDecomposition sym_eigen(const Matrix& h);

/// xorshift64* generator seeded through splitmix64. The update rule is
/// spelled out in the README so streams can be replayed bit-for-bit by any
/// implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64();

  /// Uniform on [0,1), 53-bit resolution.
  double next_double();

  /// Uniform on [lo,hi). Throws if lo >= hi.
  double uniform(double lo, double hi);

  /// Standard normal via Box-Muller (two next_double draws per call).
  double normal();

  /// Uniform integer in [0,n). n must be positive.
  std::size_t below(std::size_t n);

  /// Fisher-Yates shuffle.
  template <class T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[below(i)]);
    }
  }

  /// Stable derived seed for a child stream (dataset, model init, ...).
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t tag);

 private:
  std::uint64_t seed_;
  std::uint64_t state_;
};

}  // namespace sgnn
