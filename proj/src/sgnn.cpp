#include "sgnnlab/sgnn.hpp"

#include <cmath>
#include <stdexcept>

namespace sgnn {

double gaussian_activation(double x, double mu, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("gaussian_activation: sigma must be positive");
  const double z = (x - mu) / sigma;
  return std::exp(-0.5 * z * z);
}

Vector SgnnGradients::flatten() const {
  Vector out;
  for (const Matrix& w : d_weights) {
    out.insert(out.end(), w.data(), w.data() + w.size());
  }
  out.insert(out.end(), d_out_weights.begin(), d_out_weights.end());
  for (const Vector& mu : d_centers) out.insert(out.end(), mu.begin(), mu.end());
  for (const Vector& sg : d_sigmas) out.insert(out.end(), sg.begin(), sg.end());
  return out;
}

SgnnModel::SgnnModel(std::size_t dim, std::size_t n_per_layer, double lo, double hi, Rng& rng)
    : SgnnModel(std::vector<std::size_t>(dim, n_per_layer), lo, hi, rng) {}

SgnnModel::SgnnModel(std::vector<std::size_t> layer_sizes, double lo, double hi, Rng& rng)
    : layer_sizes_(std::move(layer_sizes)) {
  if (layer_sizes_.empty()) throw std::invalid_argument("SgnnModel: dim must be >= 1");
  for (std::size_t n : layer_sizes_) {
    if (n == 0) throw std::invalid_argument("SgnnModel: every layer needs >= 1 neuron");
  }
  if (!(lo < hi)) throw std::invalid_argument("SgnnModel: requires lo < hi");
  init_params(lo, hi, rng);
}

void SgnnModel::init_params(double lo, double hi, Rng& rng) {
  const std::size_t d = dim();

  weights_.clear();
  for (std::size_t k = 0; k + 1 < d; ++k) {
    const std::size_t n_in = layer_sizes_[k];
    const std::size_t n_out = layer_sizes_[k + 1];
    const double bound = 1.0 / std::sqrt(static_cast<double>(n_in));
    Matrix w(n_out, n_in);
    for (std::size_t i = 0; i < w.size(); ++i) w.data()[i] = rng.uniform(-bound, bound);
    weights_.push_back(std::move(w));
  }
  if (d == 1) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(layer_sizes_[0]));
    out_weights_.resize(layer_sizes_[0]);
    for (double& w : out_weights_) w = rng.uniform(-bound, bound);
  }

  centers_.assign(d, {});
  sigmas_.assign(d, {});
  for (std::size_t l = 0; l < d; ++l) {
    const std::size_t n = layer_sizes_[l];
    centers_[l].resize(n);
    sigmas_[l].resize(n);
    if (n == 1) {
      centers_[l][0] = 0.5 * (lo + hi);
      sigmas_[l][0] = 0.5 * (hi - lo);
    } else {
      const double step = (hi - lo) / static_cast<double>(n - 1);
      for (std::size_t i = 0; i < n; ++i) {
        centers_[l][i] = lo + static_cast<double>(i) * step;
        sigmas_[l][i] = step;
      }
    }
  }
}

std::size_t SgnnModel::param_count() const {
  std::size_t count = out_weights_.size();
  for (const Matrix& w : weights_) count += w.size();
  for (const Vector& mu : centers_) count += mu.size();
  for (const Vector& sg : sigmas_) count += sg.size();
  return count;
}

Vector SgnnModel::params() const {
  Vector out;
  out.reserve(param_count());
  for (const Matrix& w : weights_) out.insert(out.end(), w.data(), w.data() + w.size());
  out.insert(out.end(), out_weights_.begin(), out_weights_.end());
  for (const Vector& mu : centers_) out.insert(out.end(), mu.begin(), mu.end());
  for (const Vector& sg : sigmas_) out.insert(out.end(), sg.begin(), sg.end());
  return out;
}

void SgnnModel::set_params(std::span<const double> v) {
  if (v.size() != param_count()) {
    throw std::invalid_argument("SgnnModel::set_params: length mismatch");
  }
  std::size_t pos = 0;
  for (Matrix& w : weights_) {
    for (std::size_t i = 0; i < w.size(); ++i) w.data()[i] = v[pos++];
  }
  for (double& w : out_weights_) w = v[pos++];
  for (Vector& mu : centers_) {
    for (double& x : mu) x = v[pos++];
  }
  for (Vector& sg : sigmas_) {
    for (double& x : sg) x = v[pos++];
  }
}

void SgnnModel::post_update() {
  for (Vector& sg : sigmas_) {
    for (double& s : sg) {
      if (s < kSigmaMin) s = kSigmaMin;
    }
  }
}

void SgnnModel::check_batch(const Matrix& batch) const {
  if (batch.cols() != dim()) {
    throw std::invalid_argument("SgnnModel: batch column count must equal dim");
  }
}

SgnnForward SgnnModel::forward(const Matrix& batch) const {
  check_batch(batch);
  const std::size_t d = dim();
  const std::size_t m = batch.rows();

  SgnnForward cache;
  cache.activations.reserve(d);
  cache.layer_outputs.reserve(d);

  for (std::size_t l = 0; l < d; ++l) {
    const std::size_t n = layer_sizes_[l];
    Matrix phi(m, n);
    for (std::size_t r = 0; r < m; ++r) {
      const double x = batch(r, l);
      double* prow = phi.data() + r * n;
      for (std::size_t i = 0; i < n; ++i) {
        const double z = (x - centers_[l][i]) / sigmas_[l][i];
        prow[i] = std::exp(-0.5 * z * z);
      }
    }

    Matrix mixed(m, n);
    if (l == 0) {
      if (d == 1) {
        for (std::size_t r = 0; r < m; ++r) {
          for (std::size_t i = 0; i < n; ++i) mixed(r, i) = out_weights_[i] * phi(r, i);
        }
      } else {
        mixed = phi;
      }
    } else {
      const Matrix& w = weights_[l - 1];
      const Matrix& prev = cache.layer_outputs[l - 1];
      const std::size_t n_prev = layer_sizes_[l - 1];
      for (std::size_t r = 0; r < m; ++r) {
        const double* prev_row = prev.data() + r * n_prev;
        double* out_row = mixed.data() + r * n;
        const double* phi_row = phi.data() + r * n;
        for (std::size_t i = 0; i < n; ++i) {
          const double* wrow = w.data() + i * n_prev;
          double acc = 0.0;
          for (std::size_t j = 0; j < n_prev; ++j) acc += wrow[j] * prev_row[j];
          out_row[i] = phi_row[i] * acc;
        }
      }
    }

    cache.activations.push_back(std::move(phi));
    cache.layer_outputs.push_back(std::move(mixed));
  }

  cache.outputs.resize(m);
  const Matrix& last = cache.layer_outputs[d - 1];
  const std::size_t n_last = layer_sizes_[d - 1];
  for (std::size_t r = 0; r < m; ++r) {
    const double* row = last.data() + r * n_last;
    double acc = 0.0;
    for (std::size_t i = 0; i < n_last; ++i) acc += row[i];
    cache.outputs[r] = acc;
  }
  return cache;
}

Vector SgnnModel::predict(const Matrix& batch) const {
  check_batch(batch);
  const std::size_t d = dim();
  const std::size_t m = batch.rows();

  Vector out(m);
  Vector cur, nxt;
  for (std::size_t r = 0; r < m; ++r) {
    const std::size_t n0 = layer_sizes_[0];
    cur.resize(n0);
    const double x0 = batch(r, 0);
    for (std::size_t i = 0; i < n0; ++i) {
      const double z = (x0 - centers_[0][i]) / sigmas_[0][i];
      cur[i] = std::exp(-0.5 * z * z);
      if (d == 1) cur[i] *= out_weights_[i];
    }
    for (std::size_t l = 1; l < d; ++l) {
      const std::size_t n = layer_sizes_[l];
      const std::size_t n_prev = layer_sizes_[l - 1];
      const Matrix& w = weights_[l - 1];
      nxt.resize(n);
      const double x = batch(r, l);
      for (std::size_t i = 0; i < n; ++i) {
        const double* wrow = w.data() + i * n_prev;
        double acc = 0.0;
        for (std::size_t j = 0; j < n_prev; ++j) acc += wrow[j] * cur[j];
        const double z = (x - centers_[l][i]) / sigmas_[l][i];
        nxt[i] = std::exp(-0.5 * z * z) * acc;
      }
      std::swap(cur, nxt);
    }
    double acc = 0.0;
    for (double v : cur) acc += v;
    out[r] = acc;
  }
  return out;
}

SgnnGradients SgnnModel::backward(const Matrix& batch, const SgnnForward& cache,
                                  std::span<const double> output_grad) const {
  check_batch(batch);
  const std::size_t d = dim();
  const std::size_t m = batch.rows();
  if (output_grad.size() != m || cache.outputs.size() != m ||
      cache.activations.size() != d || cache.layer_outputs.size() != d) {
    throw std::invalid_argument("SgnnModel::backward: stale cache");
  }
  for (std::size_t l = 0; l < d; ++l) {
    if (cache.activations[l].rows() != m || cache.activations[l].cols() != layer_sizes_[l]) {
      throw std::invalid_argument("SgnnModel::backward: stale cache");
    }
  }

  SgnnGradients g;
  for (std::size_t k = 0; k + 1 < d; ++k) {
    g.d_weights.emplace_back(layer_sizes_[k + 1], layer_sizes_[k]);
  }
  g.d_out_weights.assign(out_weights_.size(), 0.0);
  g.d_centers.resize(d);
  g.d_sigmas.resize(d);
  for (std::size_t l = 0; l < d; ++l) {
    g.d_centers[l].assign(layer_sizes_[l], 0.0);
    g.d_sigmas[l].assign(layer_sizes_[l], 0.0);
  }

  Vector grad_cur, grad_prev;
  for (std::size_t r = 0; r < m; ++r) {
    const double og = output_grad[r];
    if (og == 0.0) continue;

    // d f / d N^(d)_i = 1: the output layer sums the last layer's neurons.
    grad_cur.assign(layer_sizes_[d - 1], og);

    for (std::size_t l = d; l-- > 0;) {
      const std::size_t n = layer_sizes_[l];
      const double x = batch(r, l);
      const double* phi_row = cache.activations[l].data() + r * n;
      const double* mix_row = cache.layer_outputs[l].data() + r * n;

      // d phi / d mu = phi (x-mu)/sigma^2 and d phi / d sigma = phi (x-mu)^2/sigma^3;
      // multiplying the cached post-mix value keeps the inner sum factored in.
      for (std::size_t i = 0; i < n; ++i) {
        const double diff = x - centers_[l][i];
        const double sg = sigmas_[l][i];
        const double common = grad_cur[i] * mix_row[i] * diff / (sg * sg);
        g.d_centers[l][i] += common;
        g.d_sigmas[l][i] += common * diff / sg;
      }

      if (l > 0) {
        const Matrix& w = weights_[l - 1];
        const std::size_t n_prev = layer_sizes_[l - 1];
        const double* prev_row = cache.layer_outputs[l - 1].data() + r * n_prev;
        Matrix& dw = g.d_weights[l - 1];
        grad_prev.assign(n_prev, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
          const double gi_phi = grad_cur[i] * phi_row[i];
          if (gi_phi == 0.0) continue;
          const double* wrow = w.data() + i * n_prev;
          double* dwrow = dw.data() + i * n_prev;
          for (std::size_t j = 0; j < n_prev; ++j) {
            dwrow[j] += gi_phi * prev_row[j];
            grad_prev[j] += gi_phi * wrow[j];
          }
        }
        std::swap(grad_cur, grad_prev);
      } else if (d == 1) {
        for (std::size_t i = 0; i < n; ++i) {
          g.d_out_weights[i] += grad_cur[i] * phi_row[i];
        }
      }
    }
  }

  return g;
}

Vector SgnnModel::backward_flat(const Matrix& batch, const SgnnForward& cache,
                                std::span<const double> output_grad) const {
  return backward(batch, cache, output_grad).flatten();
}

}  // namespace sgnn
