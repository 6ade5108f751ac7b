#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "sgnnlab/candidates.hpp"
#include "sgnnlab/linalg.hpp"

namespace sgnn {

enum class LossKind { MSE, RootSumSquared };

struct TrainConfig {
  std::size_t batch_size = 64;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::size_t patience = 4;
  std::size_t max_epochs = 1000;
  std::uint64_t seed = 1;
  LossKind loss_kind = LossKind::MSE;

  void validate() const;
};

struct AdamState {
  Vector first_moment;
  Vector second_moment;
  std::uint64_t step = 0;

  explicit AdamState(std::size_t n) : first_moment(n, 0.0), second_moment(n, 0.0) {}
};

/// One Adam update with bias correction; increments the step counter.
void adam_step(Vector& params, const Vector& grads, AdamState& state, const TrainConfig& cfg);

/// MSE = mean squared error; RootSumSquared = sqrt(sum of squared residuals).
double compute_loss(std::span<const double> pred, std::span<const double> target, LossKind kind);

enum class StopReason { Patience, MaxEpochs };

struct TrainReport {
  Vector train_mse;    // per epoch, mean over mini-batches
  Vector val_mse;      // per epoch
  Vector val_rss;      // per epoch
  Vector seconds;      // per epoch wall time
  std::size_t epochs_run = 0;
  StopReason stop_reason = StopReason::MaxEpochs;
  double best_val_loss = 0.0;
  std::size_t best_epoch = 0;  // 1-based
  Vector best_params;

  double final_val_mse() const { return val_mse.empty() ? 0.0 : val_mse.back(); }
};

/// Mean wall-seconds per epoch excluding the first (warm-up) epoch.
/// Throws for runs shorter than two epochs.
double measure_epoch_time(const TrainReport& report);

/// Requirements on a trainable model: flat parameter access, a cached forward
/// pass, and flat parameter gradients of sum_r og[r] * f(x_r).
template <class M>
concept TrainableModel = requires(M& m, const M& cm, const Matrix& x, std::span<const double> p) {
  { cm.dim() } -> std::convertible_to<std::size_t>;
  { cm.param_count() } -> std::convertible_to<std::size_t>;
  { cm.params() } -> std::convertible_to<Vector>;
  m.set_params(p);
  m.post_update();
  { cm.predict(x) } -> std::convertible_to<Vector>;
  { cm.backward_flat(x, cm.forward(x), p) } -> std::convertible_to<Vector>;
};

/// Mini-batch Adam over the dataset's train split: a seeded shuffle per
/// epoch, sequential mini-batches (the last partial batch is kept), one
/// validation pass on the end-of-epoch model, and patience-based early
/// stopping on the validation loss (stop after cfg.patience consecutive
/// epochs without a strictly lower value). The model keeps the last-epoch
/// parameters; the best-epoch parameters land in the report.
template <TrainableModel M>
TrainReport train(M& model, const Dataset& data, const TrainConfig& cfg) {
  cfg.validate();
  if (data.dim() != model.dim()) {
    throw std::invalid_argument("train: model and dataset dimensions disagree");
  }
  if (data.train_idx.empty() || data.val_idx.empty()) {
    throw std::invalid_argument("train: dataset split missing");
  }

  const Matrix val_inputs = gather_rows(data.inputs, data.val_idx);
  const Vector val_targets = gather(data.targets, data.val_idx);

  Rng shuffle_rng(Rng::derive(cfg.seed, 0x7261696e));  // distinct stream per training run

  std::vector<std::size_t> order = data.train_idx;
  Vector params = model.params();
  AdamState adam(params.size());

  TrainReport report;
  double best = 0.0;
  bool has_best = false;
  std::size_t stall = 0;

  for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    const auto t0 = std::chrono::steady_clock::now();

    shuffle_rng.shuffle(order);
    double train_loss_sum = 0.0;
    std::size_t seen = 0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t b = std::min(cfg.batch_size, order.size() - start);
      const std::span<const std::size_t> batch_idx(order.data() + start, b);
      const Matrix x = gather_rows(data.inputs, batch_idx);
      const Vector y = gather(data.targets, batch_idx);

      const auto fwd = model.forward(x);
      double batch_loss = 0.0;
      Vector og(b);
      for (std::size_t r = 0; r < b; ++r) {
        const double res = fwd.outputs[r] - y[r];
        batch_loss += res * res;
        og[r] = 2.0 * res / static_cast<double>(b);
      }
      batch_loss /= static_cast<double>(b);
      train_loss_sum += batch_loss * static_cast<double>(b);
      seen += b;

      const Vector grads = model.backward_flat(x, fwd, og);
      adam_step(params, grads, adam, cfg);
      model.set_params(params);
      model.post_update();
      params = model.params();  // pick up clamping
    }

    const Vector val_pred = model.predict(val_inputs);
    const double vmse = compute_loss(val_pred, val_targets, LossKind::MSE);
    const double vrss = compute_loss(val_pred, val_targets, LossKind::RootSumSquared);

    const auto t1 = std::chrono::steady_clock::now();
    report.train_mse.push_back(train_loss_sum / static_cast<double>(seen));
    report.val_mse.push_back(vmse);
    report.val_rss.push_back(vrss);
    report.seconds.push_back(std::chrono::duration<double>(t1 - t0).count());
    report.epochs_run = epoch;

    const double monitored = cfg.loss_kind == LossKind::MSE ? vmse : vrss;
    if (!has_best || monitored < best) {
      best = monitored;
      has_best = true;
      stall = 0;
      report.best_epoch = epoch;
      report.best_params = params;
    } else {
      ++stall;
    }
    if (stall >= cfg.patience) {
      report.stop_reason = StopReason::Patience;
      report.best_val_loss = best;
      return report;
    }
  }
  report.stop_reason = StopReason::MaxEpochs;
  report.best_val_loss = best;
  return report;
}

}  // namespace sgnn
