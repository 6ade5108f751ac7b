#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sgnnlab/linalg.hpp"

namespace sgnn {

/// Univariate Gaussian unit exp(-(x-mu)^2 / (2 sigma^2)). Throws if sigma <= 0.
double gaussian_activation(double x, double mu, double sigma);

struct SgnnForward {
  std::vector<Matrix> activations;    // per layer, batch x N_l (pre-mix Gaussians)
  std::vector<Matrix> layer_outputs;  // per layer, batch x N_l (post-mix values)
  Vector outputs;                     // batch
};

struct SgnnGradients {
  std::vector<Matrix> d_weights;  // d-1 inter-layer blocks (empty for d = 1)
  Vector d_out_weights;           // only for d = 1
  std::vector<Vector> d_centers;  // per layer
  std::vector<Vector> d_sigmas;   // per layer

  Vector flatten() const;
};

/// Layered separable-Gaussian network. Layer l consumes input coordinate x_l
/// through N_l univariate Gaussian neurons; layers l >= 2 mix the previous
/// layer's outputs through a trainable weight matrix. For d >= 2 the output
/// layer just sums the last layer's neurons (its weights are fixed at one);
/// for d = 1 a trainable output weight vector is kept so the parameter count
/// is N + 2N.
class SgnnModel {
 public:
  static constexpr double kSigmaMin = 1e-3;

  /// Evenly spaced initial centers on [lo,hi] with sigma equal to the center
  /// spacing (midpoint center and sigma (hi-lo)/2 when a layer has a single
  /// neuron); weights drawn uniform on [-1/sqrt(N_in), 1/sqrt(N_in)].
  SgnnModel(std::size_t dim, std::size_t n_per_layer, double lo, double hi, Rng& rng);
  SgnnModel(std::vector<std::size_t> layer_sizes, double lo, double hi, Rng& rng);

  std::size_t dim() const { return layer_sizes_.size(); }
  const std::vector<std::size_t>& layer_sizes() const { return layer_sizes_; }

  const Matrix& weight(std::size_t l) const { return weights_[l]; }
  Matrix& weight(std::size_t l) { return weights_[l]; }
  const Vector& centers(std::size_t l) const { return centers_[l]; }
  Vector& centers(std::size_t l) { return centers_[l]; }
  const Vector& sigmas(std::size_t l) const { return sigmas_[l]; }
  Vector& sigmas(std::size_t l) { return sigmas_[l]; }
  const Vector& out_weights() const { return out_weights_; }
  Vector& out_weights() { return out_weights_; }

  std::size_t param_count() const;

  /// Flat parameter vector, layer-major: W^1..W^(d-1) (row-major; the output
  /// weight vector takes this slot when d = 1), then mu^1..mu^d, then
  /// sigma^1..sigma^d.
  Vector params() const;
  void set_params(std::span<const double> v);

  /// Clamp all sigmas to kSigmaMin; call after every optimizer update.
  void post_update();

  SgnnForward forward(const Matrix& batch) const;

  /// Parameter gradients of sum_r output_grad[r] * f(x_r). The cache must
  /// come from forward() on this model and batch.
  SgnnGradients backward(const Matrix& batch, const SgnnForward& cache,
                         std::span<const double> output_grad) const;
  Vector backward_flat(const Matrix& batch, const SgnnForward& cache,
                       std::span<const double> output_grad) const;

  /// Forward outputs without retaining per-layer caches.
  Vector predict(const Matrix& batch) const;

 private:
  void init_params(double lo, double hi, Rng& rng);
  void check_batch(const Matrix& batch) const;

  std::vector<std::size_t> layer_sizes_;  // length d
  std::vector<Matrix> weights_;           // d-1 blocks, weights_[k]: N_{k+1} x N_k
  Vector out_weights_;                    // d = 1 only
  std::vector<Vector> centers_;           // per layer
  std::vector<Vector> sigmas_;            // per layer
};

}  // namespace sgnn
