#include "sgnnlab/trainer.hpp"

#include <cmath>

namespace sgnn {

void TrainConfig::validate() const {
  if (batch_size == 0) throw std::invalid_argument("TrainConfig: batch_size must be positive");
  if (learning_rate <= 0.0) throw std::invalid_argument("TrainConfig: learning_rate must be positive");
  if (beta1 < 0.0 || beta1 >= 1.0) throw std::invalid_argument("TrainConfig: beta1 out of [0,1)");
  if (beta2 < 0.0 || beta2 >= 1.0) throw std::invalid_argument("TrainConfig: beta2 out of [0,1)");
  if (epsilon <= 0.0) throw std::invalid_argument("TrainConfig: epsilon must be positive");
  if (patience == 0) throw std::invalid_argument("TrainConfig: patience must be positive");
}

void adam_step(Vector& params, const Vector& grads, AdamState& state, const TrainConfig& cfg) {
  const std::size_t n = params.size();
  if (grads.size() != n || state.first_moment.size() != n || state.second_moment.size() != n) {
    throw std::invalid_argument("adam_step: length mismatch");
  }
  state.step += 1;
  const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.step));
  for (std::size_t i = 0; i < n; ++i) {
    state.first_moment[i] = cfg.beta1 * state.first_moment[i] + (1.0 - cfg.beta1) * grads[i];
    state.second_moment[i] =
        cfg.beta2 * state.second_moment[i] + (1.0 - cfg.beta2) * grads[i] * grads[i];
    const double mhat = state.first_moment[i] / bc1;
    const double vhat = state.second_moment[i] / bc2;
    params[i] -= cfg.learning_rate * mhat / (std::sqrt(vhat) + cfg.epsilon);
  }
}

double compute_loss(std::span<const double> pred, std::span<const double> target, LossKind kind) {
  if (pred.size() != target.size()) throw std::invalid_argument("compute_loss: length mismatch");
  if (pred.empty()) throw std::invalid_argument("compute_loss: empty input");
  double sq = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = pred[i] - target[i];
    sq += d * d;
  }
  return kind == LossKind::MSE ? sq / static_cast<double>(pred.size()) : std::sqrt(sq);
}

double measure_epoch_time(const TrainReport& report) {
  if (report.seconds.size() < 2) {
    throw std::invalid_argument("measure_epoch_time: need at least two epochs");
  }
  double sum = 0.0;
  for (std::size_t i = 1; i < report.seconds.size(); ++i) sum += report.seconds[i];
  return sum / static_cast<double>(report.seconds.size() - 1);
}

}  // namespace sgnn
