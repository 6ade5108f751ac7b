#include "sgnnlab/grbfnn.hpp"

#include <cmath>
#include <stdexcept>

namespace sgnn {

Vector GrbfnnGradients::flatten() const {
  Vector out;
  out.reserve(d_weights.size() + d_centers.size() + d_widths.size());
  out.insert(out.end(), d_weights.begin(), d_weights.end());
  out.insert(out.end(), d_centers.data(), d_centers.data() + d_centers.size());
  out.insert(out.end(), d_widths.begin(), d_widths.end());
  return out;
}

GrbfnnModel::GrbfnnModel(std::size_t dim, std::size_t units, double lo, double hi, Rng& rng) {
  if (dim == 0 || units == 0) throw std::invalid_argument("GrbfnnModel: dim and units must be >= 1");
  if (!(lo < hi)) throw std::invalid_argument("GrbfnnModel: requires lo < hi");

  const double bound = 1.0 / std::sqrt(static_cast<double>(units));
  weights_.resize(units);
  for (double& w : weights_) w = rng.uniform(-bound, bound);

  centers_ = Matrix(units, dim);
  for (std::size_t i = 0; i < centers_.size(); ++i) centers_.data()[i] = rng.uniform(lo, hi);

  const double width = (hi - lo) / std::pow(static_cast<double>(units), 1.0 / static_cast<double>(dim));
  widths_.assign(units, width);
}

GrbfnnModel::GrbfnnModel(Matrix centers, Vector widths, Vector weights)
    : centers_(std::move(centers)), widths_(std::move(widths)), weights_(std::move(weights)) {
  if (widths_.size() != centers_.rows() || weights_.size() != centers_.rows()) {
    throw std::invalid_argument("GrbfnnModel: per-unit array sizes disagree");
  }
  for (double s : widths_) {
    if (!(s > 0.0)) throw std::invalid_argument("GrbfnnModel: widths must be positive");
  }
}

Vector GrbfnnModel::params() const {
  Vector out;
  out.reserve(param_count());
  out.insert(out.end(), weights_.begin(), weights_.end());
  out.insert(out.end(), centers_.data(), centers_.data() + centers_.size());
  out.insert(out.end(), widths_.begin(), widths_.end());
  return out;
}

void GrbfnnModel::set_params(std::span<const double> v) {
  if (v.size() != param_count()) {
    throw std::invalid_argument("GrbfnnModel::set_params: length mismatch");
  }
  std::size_t pos = 0;
  for (double& w : weights_) w = v[pos++];
  for (std::size_t i = 0; i < centers_.size(); ++i) centers_.data()[i] = v[pos++];
  for (double& s : widths_) s = v[pos++];
}

void GrbfnnModel::post_update() {
  for (double& s : widths_) {
    if (s < kSigmaMin) s = kSigmaMin;
  }
}

Matrix GrbfnnModel::design_matrix(const Matrix& batch) const {
  if (batch.cols() != dim()) {
    throw std::invalid_argument("GrbfnnModel: batch column count must equal dim");
  }
  const std::size_t m = batch.rows();
  const std::size_t k = units();
  const std::size_t d = dim();
  Matrix design(m, k);
  for (std::size_t r = 0; r < m; ++r) {
    const double* x = batch.data() + r * d;
    double* drow = design.data() + r * k;
    for (std::size_t u = 0; u < k; ++u) {
      const double* mu = centers_.data() + u * d;
      double r2 = 0.0;
      for (std::size_t l = 0; l < d; ++l) {
        const double diff = x[l] - mu[l];
        r2 += diff * diff;
      }
      drow[u] = std::exp(-0.5 * r2 / (widths_[u] * widths_[u]));
    }
  }
  return design;
}

GrbfnnForward GrbfnnModel::forward(const Matrix& batch) const {
  if (batch.cols() != dim()) {
    throw std::invalid_argument("GrbfnnModel: batch column count must equal dim");
  }
  const std::size_t m = batch.rows();
  const std::size_t k = units();
  const std::size_t d = dim();

  GrbfnnForward cache;
  cache.design = Matrix(m, k);
  cache.sq_dists = Matrix(m, k);
  cache.outputs.resize(m);
  for (std::size_t r = 0; r < m; ++r) {
    const double* x = batch.data() + r * d;
    double* grow = cache.design.data() + r * k;
    double* rrow = cache.sq_dists.data() + r * k;
    double acc = 0.0;
    for (std::size_t u = 0; u < k; ++u) {
      const double* mu = centers_.data() + u * d;
      double r2 = 0.0;
      for (std::size_t l = 0; l < d; ++l) {
        const double diff = x[l] - mu[l];
        r2 += diff * diff;
      }
      rrow[u] = r2;
      const double g = std::exp(-0.5 * r2 / (widths_[u] * widths_[u]));
      grow[u] = g;
      acc += weights_[u] * g;
    }
    cache.outputs[r] = acc;
  }
  return cache;
}

GrbfnnGradients GrbfnnModel::backward(const Matrix& batch, const GrbfnnForward& cache,
                                      std::span<const double> output_grad) const {
  const std::size_t m = batch.rows();
  const std::size_t k = units();
  const std::size_t d = dim();
  if (batch.cols() != d || output_grad.size() != m || cache.design.rows() != m ||
      cache.design.cols() != k || !cache.design.same_shape(cache.sq_dists)) {
    throw std::invalid_argument("GrbfnnModel::backward: stale cache");
  }

  GrbfnnGradients g;
  g.d_weights.assign(k, 0.0);
  g.d_centers = Matrix(k, d);
  g.d_widths.assign(k, 0.0);

  for (std::size_t r = 0; r < m; ++r) {
    const double og = output_grad[r];
    if (og == 0.0) continue;
    const double* x = batch.data() + r * d;
    const double* grow = cache.design.data() + r * k;
    const double* rrow = cache.sq_dists.data() + r * k;
    for (std::size_t u = 0; u < k; ++u) {
      const double gk = grow[u];
      g.d_weights[u] += og * gk;
      const double sg = widths_[u];
      const double common = og * weights_[u] * gk / (sg * sg);
      const double* mu = centers_.data() + u * d;
      double* dmu = g.d_centers.data() + u * d;
      for (std::size_t l = 0; l < d; ++l) dmu[l] += common * (x[l] - mu[l]);
      g.d_widths[u] += common * rrow[u] / sg;
    }
  }
  return g;
}

Vector GrbfnnModel::backward_flat(const Matrix& batch, const GrbfnnForward& cache,
                                  std::span<const double> output_grad) const {
  return backward(batch, cache, output_grad).flatten();
}

Vector GrbfnnModel::predict(const Matrix& batch) const {
  return forward(batch).outputs;
}

AnisotropicGrbfnn::AnisotropicGrbfnn(Matrix centers, Matrix widths, Vector weights)
    : centers_(std::move(centers)), widths_(std::move(widths)), weights_(std::move(weights)) {
  if (!centers_.same_shape(widths_) || weights_.size() != centers_.rows()) {
    throw std::invalid_argument("AnisotropicGrbfnn: per-unit array sizes disagree");
  }
}

Matrix AnisotropicGrbfnn::design_matrix(const Matrix& batch) const {
  if (batch.cols() != dim()) {
    throw std::invalid_argument("AnisotropicGrbfnn: batch column count must equal dim");
  }
  const std::size_t m = batch.rows();
  const std::size_t k = units();
  const std::size_t d = dim();
  Matrix design(m, k);
  for (std::size_t r = 0; r < m; ++r) {
    const double* x = batch.data() + r * d;
    double* drow = design.data() + r * k;
    for (std::size_t u = 0; u < k; ++u) {
      const double* mu = centers_.data() + u * d;
      const double* sg = widths_.data() + u * d;
      double expo = 0.0;
      for (std::size_t l = 0; l < d; ++l) {
        const double z = (x[l] - mu[l]) / sg[l];
        expo += z * z;
      }
      drow[u] = std::exp(-0.5 * expo);
    }
  }
  return design;
}

Vector AnisotropicGrbfnn::predict(const Matrix& batch) const {
  const Matrix design = design_matrix(batch);
  Vector out(batch.rows(), 0.0);
  for (std::size_t r = 0; r < batch.rows(); ++r) {
    const double* drow = design.data() + r * units();
    double acc = 0.0;
    for (std::size_t u = 0; u < units(); ++u) acc += weights_[u] * drow[u];
    out[r] = acc;
  }
  return out;
}

AnisotropicGrbfnn sgnn_to_grbfnn(const SgnnModel& model, std::size_t unit_cap) {
  const std::size_t d = model.dim();
  if (d < 2) throw std::invalid_argument("sgnn_to_grbfnn: requires dim >= 2");

  const auto& sizes = model.layer_sizes();
  std::size_t total = 1;
  for (std::size_t n : sizes) {
    if (total > unit_cap / n) throw std::runtime_error("sgnn_to_grbfnn: unit cap exceeded");
    total *= n;
  }

  Matrix centers(total, d);
  Matrix widths(total, d);
  Vector weights(total, 1.0);

  // Odometer over index tuples (i_1..i_d); the flat index advances with i_1
  // fastest, matching j = i_1 + i_2 N_1 + i_3 N_1 N_2 + ...
  std::vector<std::size_t> tuple(d, 0);
  for (std::size_t j = 0; j < total; ++j) {
    for (std::size_t l = 0; l < d; ++l) {
      centers(j, l) = model.centers(l)[tuple[l]];
      widths(j, l) = model.sigmas(l)[tuple[l]];
    }
    double w = 1.0;
    for (std::size_t l = 0; l + 1 < d; ++l) {
      w *= model.weight(l)(tuple[l + 1], tuple[l]);
    }
    weights[j] = w;

    for (std::size_t l = 0; l < d; ++l) {
      if (++tuple[l] < sizes[l]) break;
      tuple[l] = 0;
    }
  }
  return AnisotropicGrbfnn(std::move(centers), std::move(widths), std::move(weights));
}

}  // namespace sgnn
