#include "sgnnlab/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace sgnn {
namespace {

using Clock = std::chrono::steady_clock;

double elapsed(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

class CsvFile {
 public:
  explicit CsvFile(const std::string& path) : path_(path), out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("cannot open for writing: " + path);
  }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << '\n';
  }

  void close() {
    out_.flush();
    if (!out_) throw std::runtime_error("write failed: " + path_);
  }

 private:
  std::string path_;
  std::ofstream out_;
};

std::string num(double v) { return format_float(v); }
std::string num(std::size_t v) { return std::to_string(v); }
std::string num(int v) { return std::to_string(v); }

Matrix uniform_points(std::size_t rows, std::size_t dim, double lo, double hi, Rng& rng) {
  Matrix x(rows, dim);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < dim; ++c) x(r, c) = rng.uniform(lo, hi);
  }
  return x;
}

template <class M>
double weighted_output(const M& model, const Matrix& x, const Vector& og) {
  const Vector out = model.predict(x);
  double s = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) s += og[i] * out[i];
  return s;
}

/// Worst component gap between analytic and finite-difference gradients.
template <class M>
double gradcheck_case(const M& model, const Matrix& x, const Vector& og) {
  const auto cache = model.forward(x);
  const Vector analytic = model.backward_flat(x, cache, og);
  const auto objective = [&](const Vector& p) {
    M scratch = model;
    scratch.set_params(p);
    return weighted_output(scratch, x, og);
  };
  const Vector numeric = central_difference(objective, model.params(), 1e-5);
  double worst = 0.0;
  for (std::size_t i = 0; i < analytic.size(); ++i) {
    worst = std::max(worst, rel_gap(analytic[i], numeric[i]));
  }
  return worst;
}

Vector signed_weights(std::size_t n, Rng& rng) {
  Vector og(n);
  for (double& v : og) v = (rng.below(2) ? 1.0 : -1.0) * rng.uniform(0.5, 1.5);
  return og;
}

}  // namespace

ModelKind parse_model_kind(const std::string& name) {
  if (name == "sgnn") return ModelKind::Sgnn;
  if (name == "grbfnn") return ModelKind::Grbfnn;
  if (name == "relu") return ModelKind::Relu;
  if (name == "sigmoid") return ModelKind::Sigmoid;
  throw std::invalid_argument("unknown model kind: " + name);
}

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::Sgnn: return "sgnn";
    case ModelKind::Grbfnn: return "grbfnn";
    case ModelKind::Relu: return "relu";
    case ModelKind::Sigmoid: return "sigmoid";
  }
  throw std::invalid_argument("unknown model kind");
}

Dataset build_dataset(const RunSpec& spec, std::uint64_t data_seed) {
  Rng rng(data_seed);
  return sample_dataset(make_candidate(spec.fn, spec.dim), spec.samples, spec.lo, spec.hi, 0.8,
                        rng);
}

AnyModel build_model(const RunSpec& spec, std::uint64_t model_seed) {
  if (spec.neurons == 0) throw std::invalid_argument("build_model: neurons must be >= 1");
  Rng rng(model_seed);
  switch (spec.model) {
    case ModelKind::Sgnn:
      return SgnnModel(spec.dim, spec.neurons, spec.lo, spec.hi, rng);
    case ModelKind::Grbfnn:
      return GrbfnnModel(spec.dim, spec.neurons, spec.lo, spec.hi, rng);
    case ModelKind::Relu:
    case ModelKind::Sigmoid: {
      const std::size_t hidden = spec.layers ? spec.layers : spec.dim;
      std::vector<std::size_t> sizes(hidden + 2, spec.neurons);
      sizes.front() = spec.dim;
      sizes.back() = 1;
      const Activation act =
          spec.model == ModelKind::Relu ? Activation::ReLU : Activation::Sigmoid;
      return MlpModel(std::move(sizes), act, rng);
    }
  }
  throw std::invalid_argument("build_model: unknown model kind");
}

RunResult run_one(const RunSpec& spec, std::size_t rep, std::optional<AnyModel>* trained) {
  const std::uint64_t run_seed = Rng::derive(spec.train.seed, 0xB000 + rep);
  const std::uint64_t data_seed = Rng::derive(run_seed, 0xDA7A);
  const std::uint64_t model_seed =
      Rng::derive(run_seed, 0x30DE1 + static_cast<std::uint64_t>(spec.model));

  const Dataset data = build_dataset(spec, data_seed);
  AnyModel model = build_model(spec, model_seed);
  TrainConfig cfg = spec.train;
  cfg.seed = run_seed;

  RunResult result;
  result.report = std::visit([&](auto& m) { return train(m, data, cfg); }, model);
  result.params = std::visit([](const auto& m) { return m.param_count(); }, model);

  const TrainReport& report = result.report;
  result.epochs = report.epochs_run;
  if (report.epochs_run >= 2) {
    result.sec_per_epoch = measure_epoch_time(report);
  } else if (report.epochs_run == 1) {
    result.sec_per_epoch = report.seconds.front();
  }
  if (report.epochs_run > 0) {
    result.final_val_mse = report.val_mse.back();
    result.final_val_rss = report.val_rss.back();
    result.best_val_mse = report.best_val_loss;
    result.best_val_rss = report.val_rss[report.best_epoch - 1];
  }
  if (trained) *trained = std::move(model);
  return result;
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median: empty input");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

LinearFit linear_fit(std::span<const double> xs, std::span<const double> ys) {
  const std::size_t n = xs.size();
  if (n < 2 || ys.size() != n) throw std::invalid_argument("linear_fit: need >= 2 paired points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("linear_fit: degenerate x values");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ys[i] - (fit.slope * xs[i] + fit.intercept);
    ss_res += r * r;
  }
  fit.r2 = syy == 0.0 ? 1.0 : 1.0 - ss_res / syy;
  return fit;
}

double rel_gap(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

EquivalenceReport run_equivalence(std::size_t cases, std::size_t points, std::uint64_t seed) {
  const auto t0 = Clock::now();
  Rng rng(seed);
  EquivalenceReport report;
  report.cases = cases;
  for (std::size_t c = 0; c < cases; ++c) {
    const std::size_t d = 2 + rng.below(3);
    const std::size_t n = 2 + rng.below(4);
    const SgnnModel model(d, n, -8.0, 8.0, rng);
    const AnisotropicGrbfnn expanded = sgnn_to_grbfnn(model);
    const Matrix x = uniform_points(points, d, -8.0, 8.0, rng);
    const Vector a = model.predict(x);
    const Vector b = expanded.predict(x);
    for (std::size_t r = 0; r < points; ++r) {
      const double gap = rel_gap(a[r], b[r]);
      if (gap > report.max_rel_error) {
        report.max_rel_error = gap;
        report.worst_case = c;
        report.worst_dim = d;
      }
    }
  }
  report.seconds = elapsed(t0);
  return report;
}

double GradcheckReport::max_rel() const {
  return std::max({max_rel_sgnn, max_rel_grbfnn, max_rel_mlp});
}

GradcheckReport run_gradcheck(std::size_t per_family, std::uint64_t seed) {
  const auto t0 = Clock::now();
  Rng rng(seed);
  GradcheckReport report;
  report.per_family = per_family;

  for (std::size_t k = 0; k < per_family; ++k) {
    const std::size_t d = 1 + k % 3;
    const std::size_t n = 2 + rng.below(3);
    const SgnnModel model(d, n, -2.0, 2.0, rng);
    const Matrix x = uniform_points(3 + rng.below(3), d, -2.0, 2.0, rng);
    const Vector og = signed_weights(x.rows(), rng);
    report.max_rel_sgnn = std::max(report.max_rel_sgnn, gradcheck_case(model, x, og));
  }
  for (std::size_t k = 0; k < per_family; ++k) {
    const std::size_t d = 1 + k % 3;
    const std::size_t units = 2 + rng.below(4);
    const GrbfnnModel model(d, units, -2.0, 2.0, rng);
    const Matrix x = uniform_points(3 + rng.below(3), d, -2.0, 2.0, rng);
    const Vector og = signed_weights(x.rows(), rng);
    report.max_rel_grbfnn = std::max(report.max_rel_grbfnn, gradcheck_case(model, x, og));
  }
  for (std::size_t k = 0; k < per_family; ++k) {
    const Activation act = k % 2 ? Activation::Sigmoid : Activation::ReLU;
    const std::size_t d = 2 + k % 2;
    const std::vector<std::size_t> sizes{d, 4, 3, 1};
    // ReLU has a kink at zero; redraw any case whose pre-activations sit
    // close enough for the finite-difference step to cross it.
    for (int attempt = 0; attempt < 200; ++attempt) {
      const MlpModel model(sizes, act, rng);
      const Matrix x = uniform_points(3 + rng.below(3), d, -2.0, 2.0, rng);
      const Vector og = signed_weights(x.rows(), rng);
      if (act == Activation::ReLU) {
        const MlpForward cache = model.forward(x);
        bool near_kink = false;
        for (const Matrix& z : cache.pre_activations) {
          for (std::size_t i = 0; i < z.rows() && !near_kink; ++i) {
            for (double v : z.row(i)) {
              if (std::abs(v) < 1e-3) {
                near_kink = true;
                break;
              }
            }
          }
        }
        if (near_kink) continue;
      }
      report.max_rel_mlp = std::max(report.max_rel_mlp, gradcheck_case(model, x, og));
      break;
    }
  }
  report.seconds = elapsed(t0);
  return report;
}

HessianToyReport run_hessian_toy(std::size_t dim, std::size_t n, std::size_t samples,
                                 std::uint64_t seed) {
  const auto t0 = Clock::now();
  Rng rng(seed);
  const SgnnModel model(dim, n, -8.0, 8.0, rng);
  const Matrix x = uniform_points(samples, dim, -8.0, 8.0, rng);

  HessianToyReport report;
  report.bundle = make_hessian_bundle(model, x);

  const Matrix dense_j = report.bundle.jacobian.dense();
  const Matrix dense_h = matmul(matmul(transpose(dense_j), report.bundle.source), dense_j);
  Matrix diff = dense_h;
  for (std::size_t i = 0; i < diff.rows(); ++i) {
    for (std::size_t j = 0; j < diff.cols(); ++j) diff(i, j) -= report.bundle.projected(i, j);
  }
  const double dense_norm = frobenius_norm(dense_h);
  report.identity_rel_error =
      dense_norm == 0.0 ? frobenius_norm(diff) : frobenius_norm(diff) / dense_norm;

  report.split_error = split_reconstruction_error(report.bundle);
  report.projected_norm = frobenius_norm(report.bundle.projected);
  const Vector& eig = report.bundle.projected_eigen.eigenvalues;
  report.max_projected_eigenvalue = eig.front();
  report.min_projected_eigenvalue = eig.back();
  report.seconds = elapsed(t0);
  return report;
}

ScaleDimResult run_scale_dim(const std::vector<int>& fns, const std::vector<std::size_t>& dims,
                             const RunSpec& base, std::size_t reps) {
  if (fns.empty() || dims.empty() || reps == 0) {
    throw std::invalid_argument("run_scale_dim: empty plan");
  }
  ScaleDimResult result;
  result.dims = dims;
  for (int fn : fns) {
    for (std::size_t dim : dims) {
      RunSpec spec = base;
      spec.model = ModelKind::Sgnn;
      spec.fn = fn;
      spec.dim = dim;
      for (std::size_t rep = 0; rep < reps; ++rep) {
        const RunResult run = run_one(spec, rep);
        result.rows.push_back({fn, dim, rep, run.sec_per_epoch, run.final_val_mse});
      }
    }
  }
  Vector xs, medians;
  for (std::size_t dim : dims) {
    std::vector<double> secs;
    for (const ScaleDimRow& row : result.rows) {
      if (row.dim == dim) secs.push_back(row.sec_per_epoch);
    }
    xs.push_back(static_cast<double>(dim));
    medians.push_back(median(std::move(secs)));
  }
  result.median_sec = medians;
  result.fit = linear_fit(xs, medians);
  return result;
}

std::vector<CompareRow> run_matrix(const std::vector<RunSpec>& specs, std::size_t reps) {
  if (specs.empty() || reps == 0) throw std::invalid_argument("run_matrix: empty plan");
  std::vector<CompareRow> rows;
  rows.reserve(specs.size() * reps);
  for (const RunSpec& spec : specs) {
    for (std::size_t rep = 0; rep < reps; ++rep) {
      rows.push_back({spec, rep, run_one(spec, rep)});
    }
  }
  return rows;
}

std::vector<CompareAggregate> aggregate_rows(const std::vector<CompareRow>& rows,
                                             std::size_t reps) {
  if (reps == 0 || rows.size() % reps != 0) {
    throw std::invalid_argument("aggregate_rows: rows not a whole number of rep blocks");
  }
  std::vector<CompareAggregate> out;
  for (std::size_t start = 0; start < rows.size(); start += reps) {
    const RunSpec& spec = rows[start].spec;
    CompareAggregate agg;
    agg.model = spec.model;
    agg.fn = spec.fn;
    agg.layers = spec.layers ? spec.layers : spec.dim;
    agg.neurons = spec.neurons;
    agg.params = rows[start].result.params;
    std::vector<double> secs, finals, bests;
    for (std::size_t r = 0; r < reps; ++r) {
      const RunResult& res = rows[start + r].result;
      agg.mean_epochs += static_cast<double>(res.epochs);
      secs.push_back(res.sec_per_epoch);
      finals.push_back(res.final_val_mse);
      bests.push_back(res.best_val_mse);
    }
    agg.mean_epochs /= static_cast<double>(reps);
    agg.median_sec_per_epoch = median(secs);
    double sf = 0.0, sb = 0.0;
    for (std::size_t r = 0; r < reps; ++r) {
      sf += finals[r];
      sb += bests[r];
    }
    agg.mean_final_mse = sf / static_cast<double>(reps);
    agg.mean_best_mse = sb / static_cast<double>(reps);
    agg.median_final_mse = median(finals);
    agg.median_best_mse = median(bests);
    out.push_back(agg);
  }
  return out;
}

void write_train_log_csv(const TrainReport& report, const std::string& path) {
  CsvFile csv(path);
  csv.row({"epoch", "train_mse", "val_mse", "val_rss", "seconds"});
  for (std::size_t i = 0; i < report.epochs_run; ++i) {
    csv.row({num(i + 1), num(report.train_mse[i]), num(report.val_mse[i]), num(report.val_rss[i]),
             num(report.seconds[i])});
  }
  csv.close();
}

void write_scale_dim_csv(const ScaleDimResult& result, const std::string& path) {
  CsvFile csv(path);
  csv.row({"dim", "sec_per_epoch", "final_loss", "fn", "rep"});
  for (const ScaleDimRow& row : result.rows) {
    csv.row({num(row.dim), num(row.sec_per_epoch), num(row.final_loss), num(row.fn),
             num(row.rep)});
  }
  csv.row({"summary", num(result.fit.slope), num(result.fit.r2), "", ""});
  csv.close();
}

void write_compare_csv(const std::vector<CompareRow>& rows, const std::string& path) {
  CsvFile csv(path);
  csv.row({"model", "fn", "layers", "neurons", "params", "rep", "epochs", "sec_per_epoch",
           "final_mse", "best_mse", "final_rss", "best_rss"});
  for (const CompareRow& row : rows) {
    const RunSpec& spec = row.spec;
    const RunResult& res = row.result;
    csv.row({to_string(spec.model), num(spec.fn), num(spec.layers ? spec.layers : spec.dim),
             num(spec.neurons), num(res.params), num(row.rep), num(res.epochs),
             num(res.sec_per_epoch), num(res.final_val_mse), num(res.best_val_mse),
             num(res.final_val_rss), num(res.best_val_rss)});
  }
  csv.close();
}

void write_compare_summary_csv(const std::vector<CompareAggregate>& aggregates,
                               const std::string& path) {
  CsvFile csv(path);
  csv.row({"model", "fn", "layers", "neurons", "params", "mean_epochs", "median_sec_per_epoch",
           "mean_final_mse", "median_final_mse", "mean_best_mse", "median_best_mse"});
  for (const CompareAggregate& agg : aggregates) {
    csv.row({to_string(agg.model), num(agg.fn), num(agg.layers), num(agg.neurons),
             num(agg.params), num(agg.mean_epochs), num(agg.median_sec_per_epoch),
             num(agg.mean_final_mse), num(agg.median_final_mse), num(agg.mean_best_mse),
             num(agg.median_best_mse)});
  }
  csv.close();
}

void write_spectrum_csv(const HessianBundle& bundle, const std::string& path) {
  const Vector& src = bundle.source_eigen.eigenvalues;
  const Vector& proj = bundle.projected_eigen.eigenvalues;
  CsvFile csv(path);
  csv.row({"rank", "eigenvalue_source", "eigenvalue_projected"});
  const std::size_t n = std::max(src.size(), proj.size());
  for (std::size_t i = 0; i < n; ++i) {
    csv.row({num(i + 1), i < src.size() ? num(src[i]) : std::string(),
             i < proj.size() ? num(proj[i]) : std::string()});
  }
  csv.close();
}

SurfaceReport write_surface_csv(const AnyModel& model, const CandidateFunction& fn, std::size_t n,
                                double lo, double hi, const std::string& path) {
  if (n < 2) throw std::invalid_argument("write_surface_csv: grid needs n >= 2");
  const std::size_t dim = model_dim(model);
  if (fn.dim() != dim) throw std::invalid_argument("write_surface_csv: dimension mismatch");

  const double step = (hi - lo) / static_cast<double>(n - 1);
  Matrix grid(n * n, dim);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      grid(i * n + j, 0) = lo + static_cast<double>(i) * step;
      grid(i * n + j, 1) = lo + static_cast<double>(j) * step;
    }
  }
  const Vector pred = model_predict(model, grid);

  CsvFile csv(path);
  csv.row({"x1", "x2", "prediction", "truth"});
  SurfaceReport report;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t r = i * n + j;
      const double truth = fn(grid.row(r));
      csv.row({num(grid(r, 0)), num(grid(r, 1)), num(pred[r]), num(truth)});
      const double err = std::abs(pred[r] - truth);
      if (err > report.max_abs_error) {
        report.max_abs_error = err;
        report.worst_x1 = grid(r, 0);
        report.worst_x2 = grid(r, 1);
        report.worst_on_boundary = i == 0 || j == 0 || i == n - 1 || j == n - 1;
      }
    }
  }
  csv.close();
  return report;
}

}  // namespace sgnn
