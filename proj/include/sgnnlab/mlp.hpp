#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sgnnlab/linalg.hpp"

namespace sgnn {

enum class Activation { ReLU, Sigmoid };

struct MlpForward {
  std::vector<Matrix> pre_activations;  // per layer, batch x n_l
  std::vector<Matrix> activations;      // per layer after nonlinearity (last layer linear)
  Vector outputs;                       // batch
};

struct MlpGradients {
  std::vector<Matrix> d_weights;
  std::vector<Vector> d_biases;

  Vector flatten() const;
};

/// Dense feedforward net with a scalar linear output layer. The activation is
/// applied to hidden layers only.
class MlpModel {
 public:
  /// He-scaled normal init for ReLU, Glorot uniform for Sigmoid; biases zero.
  /// sizes = {input_dim, hidden..., 1} and needs at least one hidden layer.
  MlpModel(std::vector<std::size_t> sizes, Activation activation, Rng& rng);

  std::size_t dim() const { return sizes_.front(); }
  const std::vector<std::size_t>& sizes() const { return sizes_; }
  Activation activation() const { return activation_; }

  const Matrix& weight(std::size_t l) const { return weights_[l]; }
  const Vector& bias(std::size_t l) const { return biases_[l]; }

  std::size_t param_count() const;

  /// Flat order per layer: W (row-major) then b, layers input to output.
  Vector params() const;
  void set_params(std::span<const double> v);
  void post_update() {}

  MlpForward forward(const Matrix& batch) const;
  MlpGradients backward(const Matrix& batch, const MlpForward& cache,
                        std::span<const double> output_grad) const;
  Vector backward_flat(const Matrix& batch, const MlpForward& cache,
                       std::span<const double> output_grad) const;
  Vector predict(const Matrix& batch) const;

 private:
  std::vector<std::size_t> sizes_;
  std::vector<Matrix> weights_;  // per layer, n_out x n_in
  std::vector<Vector> biases_;
  Activation activation_;
};

/// Parameter count of a dense net with bias terms: sum (n_in + 1) * n_out.
std::size_t mlp_param_count(const std::vector<std::size_t>& sizes);

}  // namespace sgnn
