#include "sgnnlab/candidates.hpp"

#include <cmath>
#include <stdexcept>

namespace sgnn {

CandidateFunction::CandidateFunction(int id, std::size_t dim) : id_(id), dim_(dim) {}

CandidateFunction make_candidate(int id, std::size_t dim) {
  if (id < 1 || id > 10) throw std::invalid_argument("make_candidate: id must be in 1..10");
  if (dim < 2) throw std::invalid_argument("make_candidate: dim must be >= 2");
  return CandidateFunction(id, dim);
}

double CandidateFunction::operator()(std::span<const double> x) const {
  const std::size_t d = dim_;
  if (x.size() != d) throw std::invalid_argument("candidate: input dimension mismatch");

  switch (id_) {
    case 1: {  // root sum squared (sink)
      double s = 0.0;
      for (double xi : x) s += xi * xi;
      return std::sqrt(s);
    }
    case 2: {  // second-degree polynomial (saddle); x_{d+1} wraps to x_1
      double s = 0.0;
      for (std::size_t j = 0; j < d; ++j) s += x[j] * x[j] * x[(j + 1) % d];
      return s / 50.0;
    }
    case 3: {  // exponential-square sum (flatter sink)
      double s = 0.0;
      for (double xi : x) s += std::exp(xi * xi / 50.0);
      return s / 5.0;
    }
    case 4: {  // exponential-sinusoid sum; y_j = x_{j+1}, y_d = x_1
      double s = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        s += std::exp(x[j] * x[j] / 50.0) * std::sin(x[(j + 1) % d]);
      }
      return s / 5.0;
    }
    case 5: {  // polynomial-sinusoid sum; 1-based dimension index in cos(j*x_j)
      double s = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        s += x[j] * x[j] * std::cos(static_cast<double>(j + 1) * x[j]);
      }
      return s / 50.0;
    }
    case 6: {  // inverse-exponential-square sum (source)
      double s = 0.0;
      for (double xi : x) s += std::exp(xi * xi / 25.0);
      return 10.0 / s;
    }
    case 7: {  // sigmoidal (s-shaped surface)
      double s = 0.0;
      for (double xi : x) s += xi;
      return 10.0 / (1.0 + std::exp(-s / 5.0));
    }
    case 8: {  // Gaussian bump (flatter source); summed over all d dimensions
      double s = 0.0;
      for (double xi : x) s += xi * xi;
      return 10.0 * std::exp(-s / 100.0);
    }
    case 9: {  // linear
      double s = 0.0;
      for (double xi : x) s += xi;
      return s;
    }
    case 10:  // constant
      return 1.0;
    default:
      throw std::invalid_argument("candidate: id out of range");
  }
}

Dataset sample_dataset(const CandidateFunction& f, std::size_t m, double lo, double hi,
                       double split, Rng& rng) {
  if (m < 10) throw std::invalid_argument("sample_dataset: need at least 10 samples");
  if (!(lo < hi)) throw std::invalid_argument("sample_dataset: requires lo < hi");

  const std::size_t d = f.dim();
  Dataset ds;
  ds.inputs = Matrix(m, d);
  ds.targets.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < d; ++j) ds.inputs(i, j) = rng.uniform(lo, hi);
    ds.targets[i] = f(ds.inputs.row(i));
  }

  std::vector<std::size_t> order(m);
  for (std::size_t i = 0; i < m; ++i) order[i] = i;
  rng.shuffle(order);

  const auto n_train = static_cast<std::size_t>(std::llround(split * static_cast<double>(m)));
  ds.train_idx.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  ds.val_idx.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
  return ds;
}

Matrix gather_rows(const Matrix& inputs, std::span<const std::size_t> idx) {
  Matrix out(idx.size(), inputs.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    auto src = inputs.row(idx[i]);
    auto dst = out.row(i);
    for (std::size_t j = 0; j < src.size(); ++j) dst[j] = src[j];
  }
  return out;
}

Vector gather(const Vector& values, std::span<const std::size_t> idx) {
  Vector out(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) out[i] = values[idx[i]];
  return out;
}

Matrix grid_slice(const CandidateFunction& f, std::size_t n, double lo, double hi) {
  if (f.dim() < 2) throw std::invalid_argument("grid_slice: function must have dim >= 2");
  if (n < 2) throw std::invalid_argument("grid_slice: grid needs at least 2 points per axis");

  const double step = (hi - lo) / static_cast<double>(n - 1);
  Vector point(f.dim(), 0.0);
  Matrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    point[0] = lo + static_cast<double>(i) * step;
    for (std::size_t j = 0; j < n; ++j) {
      point[1] = lo + static_cast<double>(j) * step;
      out(i, j) = f(point);
    }
  }
  return out;
}

}  // namespace sgnn
