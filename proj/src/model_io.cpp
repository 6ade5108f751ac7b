#include "sgnnlab/model_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sgnn {
namespace {

constexpr const char* kHeader = "sgnn-lab-model 1";

std::vector<std::size_t> parse_sizes(const std::string& text) {
  std::vector<std::size_t> sizes;
  std::istringstream in(text);
  std::size_t v = 0;
  while (in >> v) sizes.push_back(v);
  if (sizes.empty()) throw std::runtime_error("model file: bad sizes line");
  return sizes;
}

std::string expect_value(const std::string& line, const std::string& key) {
  const std::string prefix = key + "=";
  if (line.rfind(prefix, 0) != 0) {
    throw std::runtime_error("model file: expected '" + key + "=', got '" + line + "'");
  }
  return line.substr(prefix.size());
}

}  // namespace

std::string format_float(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::string model_kind(const AnyModel& model) {
  return std::visit(
      [](const auto& m) -> std::string {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, SgnnModel>) {
          return "sgnn";
        } else if constexpr (std::is_same_v<M, GrbfnnModel>) {
          return "grbfnn";
        } else {
          return m.activation() == Activation::ReLU ? "relu" : "sigmoid";
        }
      },
      model);
}

std::size_t model_dim(const AnyModel& model) {
  return std::visit([](const auto& m) { return m.dim(); }, model);
}

Vector model_predict(const AnyModel& model, const Matrix& batch) {
  return std::visit([&](const auto& m) { return m.predict(batch); }, model);
}

void save_model(const AnyModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // binary: keep \n on every platform
  if (!out) throw std::runtime_error("cannot open for writing: " + path);

  const auto write_sizes = [&](const std::vector<std::size_t>& sizes) {
    for (std::size_t i = 0; i < sizes.size(); ++i) out << (i ? " " : "") << sizes[i];
  };
  out << kHeader << "\n";
  out << "kind=" << model_kind(model) << "\n";
  out << "sizes=";
  std::visit(
      [&](const auto& m) {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, GrbfnnModel>) {
          out << m.dim() << " " << m.units();
        } else if constexpr (std::is_same_v<M, SgnnModel>) {
          write_sizes(m.layer_sizes());
        } else {
          write_sizes(m.sizes());
        }
      },
      model);
  out << "\n";

  const Vector params = std::visit([](const auto& m) { return m.params(); }, model);
  out << "tensor=params rows=1 cols=" << params.size() << "\n";
  for (std::size_t i = 0; i < params.size(); ++i) {
    out << (i ? " " : "") << format_float(params[i]);
  }
  out << "\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

AnyModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open model file: " + path);

  std::string line;
  if (!std::getline(in, line) || line != kHeader) {
    throw std::runtime_error("model file: bad header in " + path);
  }
  if (!std::getline(in, line)) throw std::runtime_error("model file: truncated " + path);
  const std::string kind = expect_value(line, "kind");
  if (!std::getline(in, line)) throw std::runtime_error("model file: truncated " + path);
  const std::vector<std::size_t> sizes = parse_sizes(expect_value(line, "sizes"));
  if (!std::getline(in, line)) throw std::runtime_error("model file: truncated " + path);
  std::size_t rows = 0, cols = 0;
  if (std::sscanf(line.c_str(), "tensor=params rows=%zu cols=%zu", &rows, &cols) != 2 ||
      rows != 1) {
    throw std::runtime_error("model file: bad tensor line in " + path);
  }
  Vector params(cols);
  for (std::size_t i = 0; i < cols; ++i) {
    if (!(in >> params[i])) throw std::runtime_error("model file: truncated params in " + path);
  }

  Rng dummy(0);
  if (kind == "sgnn") {
    SgnnModel m(sizes, -1.0, 1.0, dummy);
    m.set_params(params);
    return m;
  }
  if (kind == "grbfnn") {
    if (sizes.size() != 2) throw std::runtime_error("model file: grbfnn sizes must be 'dim units'");
    GrbfnnModel m(sizes[0], sizes[1], -1.0, 1.0, dummy);
    m.set_params(params);
    return m;
  }
  if (kind == "relu" || kind == "sigmoid") {
    MlpModel m(sizes, kind == "relu" ? Activation::ReLU : Activation::Sigmoid, dummy);
    m.set_params(params);
    return m;
  }
  throw std::runtime_error("model file: unknown kind '" + kind + "'");
}

}  // namespace sgnn
