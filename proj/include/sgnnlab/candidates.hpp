#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sgnnlab/linalg.hpp"

namespace sgnn {

/// One of the ten benchmark functions. Deterministic, defined on all of R^d.
class CandidateFunction {
 public:
  CandidateFunction(int id, std::size_t dim);

  int id() const { return id_; }
  std::size_t dim() const { return dim_; }

  double operator()(std::span<const double> x) const;

 private:
  int id_;
  std::size_t dim_;
};

/// Throws unless id is in 1..10 and dim >= 2.
CandidateFunction make_candidate(int id, std::size_t dim);

struct Dataset {
  Matrix inputs;   // m x d
  Vector targets;  // m
  std::vector<std::size_t> train_idx;
  std::vector<std::size_t> val_idx;

  std::size_t size() const { return inputs.rows(); }
  std::size_t dim() const { return inputs.cols(); }
};

/// Uniform i.i.d. samples on [lo,hi]^d with a seeded shuffle split.
/// |train_idx| = round(split * m). Requires m >= 10 and lo < hi.
Dataset sample_dataset(const CandidateFunction& f, std::size_t m, double lo, double hi,
                       double split, Rng& rng);

/// Rows/columns of the dataset gathered into dense batch form.
Matrix gather_rows(const Matrix& inputs, std::span<const std::size_t> idx);
Vector gather(const Vector& values, std::span<const std::size_t> idx);

/// n x n grid of f over (x1,x2) in [lo,hi]^2 with the remaining coordinates
/// fixed to zero. Entry (i,j) is f at x1 = lo + i*step, x2 = lo + j*step.
Matrix grid_slice(const CandidateFunction& f, std::size_t n, double lo, double hi);

}  // namespace sgnn
