#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sgnnlab/analysis.hpp"
#include "sgnnlab/candidates.hpp"
#include "sgnnlab/model_io.hpp"
#include "sgnnlab/trainer.hpp"

namespace sgnn {

enum class ModelKind { Sgnn, Grbfnn, Relu, Sigmoid };

/// Accepts sgnn | grbfnn | relu | sigmoid; throws otherwise.
ModelKind parse_model_kind(const std::string& name);
std::string to_string(ModelKind kind);

/// Everything needed to reproduce one training run.
struct RunSpec {
  ModelKind model = ModelKind::Sgnn;
  int fn = 3;
  std::size_t dim = 2;
  std::size_t neurons = 20;  // per layer (sgnn, relu, sigmoid) or total units (grbfnn)
  std::size_t layers = 0;    // MLP hidden-layer count; 0 means one per dimension
  std::size_t samples = 2048;
  double lo = -8.0;
  double hi = 8.0;
  TrainConfig train;
};

struct RunResult {
  std::size_t epochs = 0;
  double sec_per_epoch = 0.0;
  double final_val_mse = 0.0;
  double final_val_rss = 0.0;
  double best_val_mse = 0.0;
  double best_val_rss = 0.0;
  std::size_t params = 0;
  TrainReport report;
};

Dataset build_dataset(const RunSpec& spec, std::uint64_t data_seed);
AnyModel build_model(const RunSpec& spec, std::uint64_t model_seed);

/// Trains one model. rep shifts every random stream so repetitions are
/// independent; the dataset stream does not depend on the model kind, so
/// different models compared at the same (seed, rep) see identical data.
RunResult run_one(const RunSpec& spec, std::size_t rep = 0,
                  std::optional<AnyModel>* trained = nullptr);

// ---- statistics -----------------------------------------------------------

double median(std::vector<double> values);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

/// Ordinary least squares y = slope x + intercept. Needs >= 2 points.
LinearFit linear_fit(std::span<const double> xs, std::span<const double> ys);

/// Mixed absolute/relative gap |a-b| / max(1, |a|, |b|).
double rel_gap(double a, double b);

// ---- verification drivers -------------------------------------------------

struct EquivalenceReport {
  std::size_t cases = 0;
  double max_rel_error = 0.0;
  std::size_t worst_case = 0;
  std::size_t worst_dim = 0;
  double seconds = 0.0;
};

/// Random SGNNs (d in 2..4, N in 2..5) against their GRBFNN expansion on
/// uniformly drawn points.
EquivalenceReport run_equivalence(std::size_t cases, std::size_t points, std::uint64_t seed);

struct GradcheckReport {
  std::size_t per_family = 0;
  double max_rel_sgnn = 0.0;
  double max_rel_grbfnn = 0.0;
  double max_rel_mlp = 0.0;
  double seconds = 0.0;

  double max_rel() const;
};

/// Analytic gradients of all three model families against central finite
/// differences (h = 1e-5) of the weighted-output objective.
GradcheckReport run_gradcheck(std::size_t per_family, std::uint64_t seed);

struct HessianToyReport {
  HessianBundle bundle;
  double identity_rel_error = 0.0;  // sparse projection vs dense triple product
  double split_error = 0.0;         // Frobenius residual of the eigen rebuild
  double projected_norm = 0.0;
  double min_projected_eigenvalue = 0.0;
  double max_projected_eigenvalue = 0.0;
  double seconds = 0.0;
};

/// Builds the weight Hessian of a random SGNN's expansion on uniform inputs
/// and cross-checks the projection algebra.
HessianToyReport run_hessian_toy(std::size_t dim, std::size_t n, std::size_t samples,
                                 std::uint64_t seed);

// ---- experiment drivers ---------------------------------------------------

struct ScaleDimRow {
  int fn = 0;
  std::size_t dim = 0;
  std::size_t rep = 0;
  double sec_per_epoch = 0.0;
  double final_loss = 0.0;
};

struct ScaleDimResult {
  std::vector<ScaleDimRow> rows;
  std::vector<std::size_t> dims;
  std::vector<double> median_sec;  // per dim, pooled over functions and reps
  LinearFit fit;                   // median seconds/epoch against dimension
};

ScaleDimResult run_scale_dim(const std::vector<int>& fns, const std::vector<std::size_t>& dims,
                             const RunSpec& base, std::size_t reps);

struct CompareRow {
  RunSpec spec;
  std::size_t rep = 0;
  RunResult result;
};

/// reps runs of every spec; row order is spec-major, rep-minor.
std::vector<CompareRow> run_matrix(const std::vector<RunSpec>& specs, std::size_t reps);

struct CompareAggregate {
  ModelKind model = ModelKind::Sgnn;
  int fn = 0;
  std::size_t layers = 0;
  std::size_t neurons = 0;
  std::size_t params = 0;
  double mean_epochs = 0.0;
  double median_sec_per_epoch = 0.0;
  double mean_final_mse = 0.0;
  double median_final_mse = 0.0;
  double mean_best_mse = 0.0;
  double median_best_mse = 0.0;
};

/// One aggregate per spec, in spec order.
std::vector<CompareAggregate> aggregate_rows(const std::vector<CompareRow>& rows,
                                             std::size_t reps);

// ---- CSV artifacts --------------------------------------------------------
// All files are UTF-8 with \n line endings and 17-significant-digit floats.

void write_train_log_csv(const TrainReport& report, const std::string& path);
void write_scale_dim_csv(const ScaleDimResult& result, const std::string& path);
void write_compare_csv(const std::vector<CompareRow>& rows, const std::string& path);
void write_compare_summary_csv(const std::vector<CompareAggregate>& aggregates,
                               const std::string& path);
void write_spectrum_csv(const HessianBundle& bundle, const std::string& path);

struct SurfaceReport {
  double max_abs_error = 0.0;
  double worst_x1 = 0.0;
  double worst_x2 = 0.0;
  bool worst_on_boundary = false;
};

/// n x n grid over [lo,hi]^2 in the first two coordinates (others zero);
/// writes x1,x2,prediction,truth rows and reports where the error peaks.
SurfaceReport write_surface_csv(const AnyModel& model, const CandidateFunction& fn, std::size_t n,
                                double lo, double hi, const std::string& path);

/// Central-difference gradient of a scalar function of the parameter vector.
template <class F>
Vector central_difference(F&& f, Vector params, double h) {
  Vector grad(params.size());
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double p = params[i];
    params[i] = p + h;
    const double fp = f(params);
    params[i] = p - h;
    const double fm = f(params);
    params[i] = p;
    grad[i] = (fp - fm) / (2.0 * h);
  }
  return grad;
}

}  // namespace sgnn
