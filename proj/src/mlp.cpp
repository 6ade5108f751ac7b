#include "sgnnlab/mlp.hpp"

#include <cmath>
#include <stdexcept>

namespace sgnn {

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

}  // namespace

Vector MlpGradients::flatten() const {
  Vector out;
  for (std::size_t l = 0; l < d_weights.size(); ++l) {
    const Matrix& w = d_weights[l];
    out.insert(out.end(), w.data(), w.data() + w.size());
    out.insert(out.end(), d_biases[l].begin(), d_biases[l].end());
  }
  return out;
}

std::size_t mlp_param_count(const std::vector<std::size_t>& sizes) {
  std::size_t count = 0;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    count += (sizes[l] + 1) * sizes[l + 1];
  }
  return count;
}

MlpModel::MlpModel(std::vector<std::size_t> sizes, Activation activation, Rng& rng)
    : sizes_(std::move(sizes)), activation_(activation) {
  if (sizes_.size() < 3) {
    throw std::invalid_argument("MlpModel: need input, at least one hidden, and output layer");
  }
  for (std::size_t n : sizes_) {
    if (n == 0) throw std::invalid_argument("MlpModel: zero-width layer");
  }

  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    const std::size_t fan_in = sizes_[l];
    const std::size_t fan_out = sizes_[l + 1];
    Matrix w(fan_out, fan_in);
    if (activation_ == Activation::ReLU) {
      const double std_dev = std::sqrt(2.0 / static_cast<double>(fan_in));
      for (std::size_t i = 0; i < w.size(); ++i) w.data()[i] = std_dev * rng.normal();
    } else {
      const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
      for (std::size_t i = 0; i < w.size(); ++i) w.data()[i] = rng.uniform(-bound, bound);
    }
    weights_.push_back(std::move(w));
    biases_.emplace_back(fan_out, 0.0);
  }
}

std::size_t MlpModel::param_count() const { return mlp_param_count(sizes_); }

Vector MlpModel::params() const {
  Vector out;
  out.reserve(param_count());
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    const Matrix& w = weights_[l];
    out.insert(out.end(), w.data(), w.data() + w.size());
    out.insert(out.end(), biases_[l].begin(), biases_[l].end());
  }
  return out;
}

void MlpModel::set_params(std::span<const double> v) {
  if (v.size() != param_count()) {
    throw std::invalid_argument("MlpModel::set_params: length mismatch");
  }
  std::size_t pos = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    Matrix& w = weights_[l];
    for (std::size_t i = 0; i < w.size(); ++i) w.data()[i] = v[pos++];
    for (double& b : biases_[l]) b = v[pos++];
  }
}

MlpForward MlpModel::forward(const Matrix& batch) const {
  if (batch.cols() != dim()) {
    throw std::invalid_argument("MlpModel: batch column count must equal input dim");
  }
  const std::size_t m = batch.rows();
  const std::size_t n_layers = weights_.size();

  MlpForward cache;
  cache.pre_activations.reserve(n_layers);
  cache.activations.reserve(n_layers);

  const Matrix* input = &batch;
  for (std::size_t l = 0; l < n_layers; ++l) {
    const Matrix& w = weights_[l];
    const Vector& b = biases_[l];
    const std::size_t n_out = w.rows();
    const std::size_t n_in = w.cols();
    Matrix z(m, n_out);
    for (std::size_t r = 0; r < m; ++r) {
      const double* xrow = input->data() + r * n_in;
      double* zrow = z.data() + r * n_out;
      for (std::size_t i = 0; i < n_out; ++i) {
        const double* wrow = w.data() + i * n_in;
        double acc = b[i];
        for (std::size_t j = 0; j < n_in; ++j) acc += wrow[j] * xrow[j];
        zrow[i] = acc;
      }
    }

    Matrix a = z;
    if (l + 1 < n_layers) {
      for (std::size_t i = 0; i < a.size(); ++i) {
        double& v = a.data()[i];
        v = activation_ == Activation::ReLU ? (v > 0.0 ? v : 0.0) : sigmoid(v);
      }
    }
    cache.pre_activations.push_back(std::move(z));
    cache.activations.push_back(std::move(a));
    input = &cache.activations.back();
  }

  cache.outputs.resize(m);
  for (std::size_t r = 0; r < m; ++r) cache.outputs[r] = cache.activations.back()(r, 0);
  return cache;
}

MlpGradients MlpModel::backward(const Matrix& batch, const MlpForward& cache,
                                std::span<const double> output_grad) const {
  const std::size_t m = batch.rows();
  const std::size_t n_layers = weights_.size();
  if (batch.cols() != dim() || output_grad.size() != m ||
      cache.pre_activations.size() != n_layers || cache.activations.size() != n_layers) {
    throw std::invalid_argument("MlpModel::backward: stale cache");
  }

  MlpGradients g;
  g.d_weights.reserve(n_layers);
  g.d_biases.reserve(n_layers);
  for (std::size_t l = 0; l < n_layers; ++l) {
    g.d_weights.emplace_back(weights_[l].rows(), weights_[l].cols());
    g.d_biases.emplace_back(weights_[l].rows(), 0.0);
  }

  // delta starts as the output-layer gradient (linear output, width 1).
  Matrix delta(m, 1);
  for (std::size_t r = 0; r < m; ++r) delta(r, 0) = output_grad[r];

  for (std::size_t l = n_layers; l-- > 0;) {
    const Matrix& w = weights_[l];
    const std::size_t n_out = w.rows();
    const std::size_t n_in = w.cols();
    const Matrix& prev_act = (l == 0) ? batch : cache.activations[l - 1];

    Matrix& dw = g.d_weights[l];
    Vector& db = g.d_biases[l];
    for (std::size_t r = 0; r < m; ++r) {
      const double* drow = delta.data() + r * n_out;
      const double* arow = prev_act.data() + r * n_in;
      for (std::size_t i = 0; i < n_out; ++i) {
        const double di = drow[i];
        if (di == 0.0) continue;
        db[i] += di;
        double* dwrow = dw.data() + i * n_in;
        for (std::size_t j = 0; j < n_in; ++j) dwrow[j] += di * arow[j];
      }
    }

    if (l == 0) break;

    Matrix next_delta(m, n_in);
    const Matrix& z_prev = cache.pre_activations[l - 1];
    for (std::size_t r = 0; r < m; ++r) {
      const double* drow = delta.data() + r * n_out;
      double* ndrow = next_delta.data() + r * n_in;
      const double* zrow = z_prev.data() + r * n_in;
      for (std::size_t j = 0; j < n_in; ++j) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n_out; ++i) acc += drow[i] * w(i, j);
        // ReLU subgradient at 0 is taken as 0.
        double dact;
        if (activation_ == Activation::ReLU) {
          dact = zrow[j] > 0.0 ? 1.0 : 0.0;
        } else {
          const double s = sigmoid(zrow[j]);
          dact = s * (1.0 - s);
        }
        ndrow[j] = acc * dact;
      }
    }
    delta = std::move(next_delta);
  }
  return g;
}

Vector MlpModel::backward_flat(const Matrix& batch, const MlpForward& cache,
                               std::span<const double> output_grad) const {
  return backward(batch, cache, output_grad).flatten();
}

Vector MlpModel::predict(const Matrix& batch) const {
  return forward(batch).outputs;
}

}  // namespace sgnn
