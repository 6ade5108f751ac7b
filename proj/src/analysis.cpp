#include "sgnnlab/analysis.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace sgnn {
namespace {

std::size_t checked_mul(std::size_t a, std::size_t b, const char* what) {
  if (a != 0 && b > std::numeric_limits<std::size_t>::max() / a) {
    throw std::overflow_error(what);
  }
  return a * b;
}

}  // namespace

std::size_t sgnn_trainable_count(std::size_t d, std::size_t n) {
  if (d == 0 || n == 0) throw std::invalid_argument("sgnn_trainable_count: d, n must be >= 1");
  if (d == 1) return 3 * n;
  return (d - 1) * n * n + 2 * d * n;
}

GrbfnnCounts grbfnn_counts(std::size_t d, std::size_t n) {
  if (d == 0 || n == 0) throw std::invalid_argument("grbfnn_counts: d, n must be >= 1");
  std::size_t units = 1;
  for (std::size_t i = 0; i < d; ++i) units = checked_mul(units, n, "grbfnn_counts: N^d overflow");
  GrbfnnCounts counts;
  counts.weights_only = units;
  counts.with_centers_widths = checked_mul(units, d + 2, "grbfnn_counts: N^d (d+2) overflow");
  return counts;
}

FlopCounts sgnn_flops(std::size_t d, std::size_t n, std::size_t m) {
  if (d < 2) throw std::invalid_argument("sgnn_flops: d must be >= 2");
  const unsigned long long nn = n;
  const unsigned long long mm = m;
  FlopCounts flops;
  flops.forward = mm * (6 * nn + (d - 1) * (2 * nn * nn + 6 * nn) + nn);
  flops.backward = mm * d * (3 * nn * nn + 2 * nn) + mm * nn;
  return flops;
}

ComplexityReport sgnn_complexity(std::size_t d, std::size_t n, std::size_t m) {
  ComplexityReport report;
  report.model = "sgnn";
  report.neurons = n;
  report.weights_only = d == 1 ? n : (d - 1) * n * n;
  report.all_trainables = sgnn_trainable_count(d, n);
  if (d >= 2) report.flops = sgnn_flops(d, n, m);
  report.samples = m;
  return report;
}

ComplexityReport grbfnn_complexity(std::size_t d, std::size_t n) {
  const GrbfnnCounts counts = grbfnn_counts(d, n);
  ComplexityReport report;
  report.model = "grbfnn";
  report.neurons = counts.weights_only;
  report.weights_only = counts.weights_only;
  report.all_trainables = counts.with_centers_widths;
  return report;
}

Matrix SparseMatrix::dense() const {
  Matrix out(rows, cols);
  for (const Entry& e : entries) out(e.row, e.col) += e.value;
  return out;
}

namespace {

Matrix gram_hessian(const Matrix& design) {
  const std::size_t k = design.cols();
  if (k > kHessianUnitCap) throw std::invalid_argument("grbfnn_weight_hessian: unit cap exceeded");
  Matrix h(k, k);
  for (std::size_t r = 0; r < design.rows(); ++r) {
    const auto row = design.row(r);
    for (std::size_t i = 0; i < k; ++i) {
      const double di = 2.0 * row[i];
      if (di == 0.0) continue;
      for (std::size_t j = 0; j < k; ++j) h(i, j) += di * row[j];
    }
  }
  return h;
}

}  // namespace

Matrix grbfnn_weight_hessian(const GrbfnnModel& model, const Matrix& inputs) {
  if (model.units() > kHessianUnitCap) {
    throw std::invalid_argument("grbfnn_weight_hessian: unit cap exceeded");
  }
  return gram_hessian(model.design_matrix(inputs));
}

Matrix grbfnn_weight_hessian(const AnisotropicGrbfnn& model, const Matrix& inputs) {
  if (model.units() > kHessianUnitCap) {
    throw std::invalid_argument("grbfnn_weight_hessian: unit cap exceeded");
  }
  return gram_hessian(model.design_matrix(inputs));
}

SparseMatrix mapping_jacobian(const SgnnModel& model) {
  const std::size_t d = model.dim();
  if (d < 2) throw std::invalid_argument("mapping_jacobian: dim must be >= 2");
  const auto& sizes = model.layer_sizes();

  std::size_t units = 1;
  for (std::size_t n : sizes) units = checked_mul(units, n, "mapping_jacobian: unit overflow");
  if (units > kHessianUnitCap) throw std::invalid_argument("mapping_jacobian: unit cap exceeded");

  std::vector<std::size_t> col_offset(d - 1, 0);
  std::size_t total_weights = 0;
  for (std::size_t l = 0; l + 1 < d; ++l) {
    col_offset[l] = total_weights;
    total_weights += sizes[l + 1] * sizes[l];
  }

  SparseMatrix jac;
  jac.rows = units;
  jac.cols = total_weights;
  jac.entries.reserve(units * (d - 1));

  std::vector<std::size_t> tuple(d, 0);  // i_1..i_d, i_1 advances fastest
  std::vector<double> factor(d - 1), prefix(d - 1), suffix(d - 1);
  for (std::size_t j = 0; j < units; ++j) {
    for (std::size_t l = 0; l + 1 < d; ++l) factor[l] = model.weight(l)(tuple[l + 1], tuple[l]);
    double acc = 1.0;
    for (std::size_t l = 0; l + 1 < d; ++l) {
      prefix[l] = acc;
      acc *= factor[l];
    }
    acc = 1.0;
    for (std::size_t l = d - 1; l-- > 0;) {
      suffix[l] = acc;
      acc *= factor[l];
    }
    for (std::size_t l = 0; l + 1 < d; ++l) {
      const std::size_t col = col_offset[l] + tuple[l + 1] * sizes[l] + tuple[l];
      jac.entries.push_back({j, col, prefix[l] * suffix[l]});
    }
    for (std::size_t l = 0; l < d; ++l) {
      if (++tuple[l] < sizes[l]) break;
      tuple[l] = 0;
    }
  }
  return jac;
}

Matrix projected_hessian(const Matrix& source, const SparseMatrix& jacobian) {
  if (source.rows() != source.cols() || source.rows() != jacobian.rows) {
    throw std::invalid_argument("projected_hessian: shape mismatch");
  }
  const std::size_t k = jacobian.rows;
  const std::size_t p = jacobian.cols;

  Matrix hj(k, p);  // H_src J
  for (const auto& e : jacobian.entries) {
    for (std::size_t i = 0; i < k; ++i) hj(i, e.col) += source(i, e.row) * e.value;
  }
  Matrix h(p, p);  // J^T (H_src J)
  for (const auto& e : jacobian.entries) {
    const auto row = hj.row(e.row);
    for (std::size_t c = 0; c < p; ++c) h(e.col, c) += e.value * row[c];
  }
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = i + 1; j < p; ++j) {
      const double avg = 0.5 * (h(i, j) + h(j, i));
      h(i, j) = avg;
      h(j, i) = avg;
    }
  }
  return h;
}

HessianBundle make_hessian_bundle(const SgnnModel& model, const Matrix& inputs) {
  HessianBundle bundle;
  const AnisotropicGrbfnn expanded = sgnn_to_grbfnn(model, kHessianUnitCap);
  bundle.source = grbfnn_weight_hessian(expanded, inputs);
  bundle.jacobian = mapping_jacobian(model);
  bundle.projected = projected_hessian(bundle.source, bundle.jacobian);
  bundle.source_eigen = sym_eigen(bundle.source);
  bundle.projected_eigen = sym_eigen(bundle.projected);

  const std::size_t k = bundle.jacobian.rows;
  const std::size_t p = bundle.jacobian.cols;
  bundle.q = Matrix(k, p);
  const Matrix& v = bundle.source_eigen.eigenvectors;
  for (const auto& e : bundle.jacobian.entries) {
    for (std::size_t i = 0; i < k; ++i) bundle.q(i, e.col) += v(e.row, i) * e.value;
  }
  return bundle;
}

namespace {

/// sum over the first k eigenpairs of lambda_i q_i q_i^T.
Matrix eigen_partial_sum(const HessianBundle& bundle, std::size_t k) {
  const std::size_t p = bundle.q.cols();
  Matrix out(p, p);
  for (std::size_t i = 0; i < k; ++i) {
    const double lambda = bundle.source_eigen.eigenvalues[i];
    if (lambda == 0.0) continue;
    const auto qi = bundle.q.row(i);
    for (std::size_t a = 0; a < p; ++a) {
      const double la = lambda * qi[a];
      if (la == 0.0) continue;
      for (std::size_t b = 0; b < p; ++b) out(a, b) += la * qi[b];
    }
  }
  return out;
}

}  // namespace

double split_reconstruction_error(const HessianBundle& bundle) {
  Matrix rebuilt = eigen_partial_sum(bundle, bundle.source_eigen.eigenvalues.size());
  for (std::size_t i = 0; i < rebuilt.rows(); ++i) {
    for (std::size_t j = 0; j < rebuilt.cols(); ++j) rebuilt(i, j) -= bundle.projected(i, j);
  }
  return frobenius_norm(rebuilt);
}

double dominant_fraction(const HessianBundle& bundle, std::size_t k) {
  if (k > bundle.source_eigen.eigenvalues.size()) {
    throw std::invalid_argument("dominant_fraction: k exceeds rank");
  }
  const double denom = frobenius_norm(bundle.projected);
  if (denom == 0.0) return 1.0;
  return frobenius_norm(eigen_partial_sum(bundle, k)) / denom;
}

}  // namespace sgnn
