#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "sgnnlab/grbfnn.hpp"
#include "sgnnlab/linalg.hpp"
#include "sgnnlab/sgnn.hpp"

namespace sgnn {

/// Dense weight Hessians and mapping Jacobians are only formed up to this
/// many GRBFNN units.
inline constexpr std::size_t kHessianUnitCap = 2000;

struct GrbfnnCounts {
  std::size_t weights_only = 0;         // output weights: N^d
  std::size_t with_centers_widths = 0;  // + d center coords + 1 width per unit
};

struct FlopCounts {
  unsigned long long forward = 0;
  unsigned long long backward = 0;
};

/// SGNN trainable-variable count: 3N for d = 1 (output weights plus centers
/// and widths), (d-1)N^2 + 2dN for d >= 2.
std::size_t sgnn_trainable_count(std::size_t d, std::size_t n);

/// Both counting conventions for a GRBFNN with N^d units. Throws on overflow.
GrbfnnCounts grbfnn_counts(std::size_t d, std::size_t n);

/// Closed-form FLOP counts for one SGNN pass over m samples (d >= 2):
/// forward m(6N + (d-1)(2N^2+6N) + N), backward m·d·(3N^2+2N) + mN.
FlopCounts sgnn_flops(std::size_t d, std::size_t n, std::size_t m);

struct ComplexityReport {
  std::string model;
  std::size_t neurons = 0;  // per layer (SGNN) or total units (GRBFNN)
  std::size_t weights_only = 0;
  std::size_t all_trainables = 0;
  FlopCounts flops;  // zero for GRBFNN; no closed form is modelled
  std::size_t samples = 0;
};

ComplexityReport sgnn_complexity(std::size_t d, std::size_t n, std::size_t m);
ComplexityReport grbfnn_complexity(std::size_t d, std::size_t n);

/// Coordinate-triplet sparse matrix; dense() materializes at toy sizes.
struct SparseMatrix {
  struct Entry {
    std::size_t row;
    std::size_t col;
    double value;
  };

  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Entry> entries;

  Matrix dense() const;
};

/// Hessian of the sum-of-squares loss over output weights with centers and
/// widths held fixed: exactly 2 D^T D for design matrix D. Throws beyond
/// kHessianUnitCap units.
Matrix grbfnn_weight_hessian(const GrbfnnModel& model, const Matrix& inputs);
Matrix grbfnn_weight_hessian(const AnisotropicGrbfnn& model, const Matrix& inputs);

/// Jacobian of the weight-product map from SGNN mixing weights to GRBFNN
/// output weights. Row j (flat unit index) holds one entry per layer factor,
/// valued at the product of the other d-2 factors; column order matches the
/// W blocks of SgnnModel::params(). Identity for d = 2.
SparseMatrix mapping_jacobian(const SgnnModel& model);

/// H = J^T H_src J, symmetrized. Throws on shape mismatch.
Matrix projected_hessian(const Matrix& source, const SparseMatrix& jacobian);

struct HessianBundle {
  Matrix source;         // over GRBFNN output weights
  SparseMatrix jacobian;
  Matrix projected;      // over SGNN mixing weights
  EigenDecomposition source_eigen;
  EigenDecomposition projected_eigen;
  Matrix q;  // V^T J: row i is the jacobian image paired with source eigenvalue i
};

/// Converts the model, builds both Hessians from the sample inputs, and
/// decomposes their spectra.
HessianBundle make_hessian_bundle(const SgnnModel& model, const Matrix& inputs);

/// Frobenius error of rebuilding the projected Hessian from the full eigen
/// split sum_i lambda_i q_i q_i^T.
double split_reconstruction_error(const HessianBundle& bundle);

/// Fraction of the projected Hessian's Frobenius mass captured by the top-k
/// source eigenpairs: ||sum_{i<k} lambda_i q_i q_i^T||_F / ||H||_F.
double dominant_fraction(const HessianBundle& bundle, std::size_t k);

}  // namespace sgnn
