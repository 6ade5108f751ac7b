#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sgnnlab/linalg.hpp"
#include "sgnnlab/sgnn.hpp"

namespace sgnn {

struct GrbfnnForward {
  Matrix design;     // batch x K, unit responses G_k(x_r)
  Matrix sq_dists;   // batch x K, ||x_r - mu_k||^2
  Vector outputs;    // batch
};

struct GrbfnnGradients {
  Vector d_weights;  // K
  Matrix d_centers;  // K x d
  Vector d_widths;   // K

  Vector flatten() const;
};

/// Single hidden layer of isotropic multivariate Gaussian units with linear
/// output weights. Weights, centers, and widths are all trainable.
class GrbfnnModel {
 public:
  static constexpr double kSigmaMin = 1e-3;

  /// Weights uniform on [-1/sqrt(K), 1/sqrt(K)], centers i.i.d. uniform on
  /// [lo,hi]^d, widths (hi-lo)/K^(1/d).
  GrbfnnModel(std::size_t dim, std::size_t units, double lo, double hi, Rng& rng);
  GrbfnnModel(Matrix centers, Vector widths, Vector weights);

  std::size_t dim() const { return centers_.cols(); }
  std::size_t units() const { return centers_.rows(); }

  const Matrix& centers() const { return centers_; }
  const Vector& widths() const { return widths_; }
  const Vector& weights() const { return weights_; }
  Vector& weights() { return weights_; }

  std::size_t param_count() const { return units() * (dim() + 2); }

  /// Flat order: weights, centers (row-major), widths.
  Vector params() const;
  void set_params(std::span<const double> v);
  void post_update();

  Matrix design_matrix(const Matrix& batch) const;
  GrbfnnForward forward(const Matrix& batch) const;
  GrbfnnGradients backward(const Matrix& batch, const GrbfnnForward& cache,
                           std::span<const double> output_grad) const;
  Vector backward_flat(const Matrix& batch, const GrbfnnForward& cache,
                       std::span<const double> output_grad) const;
  Vector predict(const Matrix& batch) const;

 private:
  Matrix centers_;  // K x d
  Vector widths_;   // K
  Vector weights_;  // K
};

/// GRBFNN variant with one width per unit and dimension; the exact image of
/// an SGNN under the weight-product map lands here because the separable
/// product has per-dimension widths.
class AnisotropicGrbfnn {
 public:
  AnisotropicGrbfnn(Matrix centers, Matrix widths, Vector weights);

  std::size_t dim() const { return centers_.cols(); }
  std::size_t units() const { return centers_.rows(); }

  const Matrix& centers() const { return centers_; }
  const Matrix& widths() const { return widths_; }
  const Vector& weights() const { return weights_; }

  Matrix design_matrix(const Matrix& batch) const;
  Vector predict(const Matrix& batch) const;

 private:
  Matrix centers_;  // K x d
  Matrix widths_;   // K x d
  Vector weights_;  // K
};

/// Expands an SGNN into the equivalent GRBFNN: one unit per index tuple
/// (i_1..i_d), centered at (mu^1_{i_1},...,mu^d_{i_d}) with matching
/// per-dimension widths and output weight W^(d-1)_{i_d i_{d-1}} ... W^(1)_{i_2 i_1}.
/// Tuples are flattened 0-based, least-significant first:
/// j = i_1 + i_2 N_1 + i_3 N_1 N_2 + ...
/// Requires dim >= 2 and at most unit_cap units.
AnisotropicGrbfnn sgnn_to_grbfnn(const SgnnModel& model, std::size_t unit_cap = 100000);

}  // namespace sgnn
