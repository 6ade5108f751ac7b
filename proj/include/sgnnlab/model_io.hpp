#pragma once

#include <string>
#include <variant>

#include "sgnnlab/grbfnn.hpp"
#include "sgnnlab/linalg.hpp"
#include "sgnnlab/mlp.hpp"
#include "sgnnlab/sgnn.hpp"

namespace sgnn {

/// Shortest decimal form that round-trips a double exactly (17 significant
/// digits, '.' separator).
std::string format_float(double value);

using AnyModel = std::variant<SgnnModel, GrbfnnModel, MlpModel>;

/// Model kind tag used in files and CLI flags: sgnn, grbfnn, relu, sigmoid.
std::string model_kind(const AnyModel& model);

std::size_t model_dim(const AnyModel& model);
Vector model_predict(const AnyModel& model, const Matrix& batch);

/// Plain-text model files: a header line, key=value metadata, then one flat
/// parameter tensor. Throws on I/O failure.
void save_model(const AnyModel& model, const std::string& path);
AnyModel load_model(const std::string& path);

}  // namespace sgnn
