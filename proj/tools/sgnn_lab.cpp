// sgnn-lab: benchmark harness for separable Gaussian networks, their RBF
// expansion, and MLP baselines. Exit codes: 0 success, 1 verification or
// runtime failure, 2 usage error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sgnnlab/bench.hpp"

namespace {

using namespace sgnn;

struct Flags {
  std::string model = "sgnn";
  int fn = 3;
  std::size_t dim = 2;
  std::size_t neurons = 20;
  std::size_t layers = 0;
  std::size_t data = 2048;
  std::size_t batch = 64;
  std::size_t reps = 5;
  std::uint64_t seed = 1;
  std::string out = ".";
  std::size_t max_epochs = 1000;
  std::size_t patience = 4;
  std::string model_file;
  std::size_t grid_n = 64;
  std::string config;
};

/// Registered options per subcommand, keyed by config-file name.
using OptionMap = std::map<std::string, CLI::Option*>;

OptionMap add_common(CLI::App* cmd, Flags& f) {
  OptionMap opts;
  opts["model"] = cmd->add_option("--model", f.model, "sgnn | grbfnn | relu | sigmoid");
  opts["fn"] = cmd->add_option("--fn", f.fn, "candidate function id 1..10 (0 = all)");
  opts["dim"] = cmd->add_option("--dim", f.dim, "input dimension");
  opts["neurons"] = cmd->add_option("--neurons", f.neurons, "neurons per layer (grbfnn: units)");
  opts["layers"] = cmd->add_option("--layers", f.layers, "MLP hidden layers (0 = one per dim)");
  opts["data"] = cmd->add_option("--data", f.data, "dataset size");
  opts["batch"] = cmd->add_option("--batch", f.batch, "mini-batch size");
  opts["reps"] = cmd->add_option("--reps", f.reps, "repetitions");
  opts["seed"] = cmd->add_option("--seed", f.seed, "base RNG seed");
  opts["out"] = cmd->add_option("--out", f.out, "output directory");
  opts["max-epochs"] = cmd->add_option("--max-epochs", f.max_epochs, "epoch cap");
  opts["patience"] = cmd->add_option("--patience", f.patience, "early-stopping patience");
  opts["model-file"] = cmd->add_option("--model-file", f.model_file, "saved model path");
  opts["grid-n"] = cmd->add_option("--grid-n", f.grid_n, "surface grid resolution");
  cmd->add_option("--config", f.config, "key=value file; explicit flags override it");
  return opts;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

void assign_config_value(Flags& f, const std::string& key, const std::string& value) {
  const auto to_count = [&](const std::string& s) -> std::size_t {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing characters");
    return static_cast<std::size_t>(v);
  };
  if (key == "model") {
    f.model = value;
  } else if (key == "fn") {
    f.fn = static_cast<int>(to_count(value));
  } else if (key == "dim") {
    f.dim = to_count(value);
  } else if (key == "neurons") {
    f.neurons = to_count(value);
  } else if (key == "layers") {
    f.layers = to_count(value);
  } else if (key == "data") {
    f.data = to_count(value);
  } else if (key == "batch") {
    f.batch = to_count(value);
  } else if (key == "reps") {
    f.reps = to_count(value);
  } else if (key == "seed") {
    f.seed = to_count(value);
  } else if (key == "out") {
    f.out = value;
  } else if (key == "max-epochs") {
    f.max_epochs = to_count(value);
  } else if (key == "patience") {
    f.patience = to_count(value);
  } else if (key == "model-file") {
    f.model_file = value;
  } else if (key == "grid-n") {
    f.grid_n = to_count(value);
  } else {
    throw std::invalid_argument("unknown config key: " + key);
  }
}

/// Plain key=value lines ('#' comments); keys given on the command line win.
void apply_config(Flags& f, const OptionMap& opts) {
  if (f.config.empty()) return;
  std::ifstream in(f.config);
  if (!in) throw std::invalid_argument("cannot read config file: " + f.config);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument(f.config + ":" + std::to_string(lineno) + ": expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = opts.find(key);
    if (it != opts.end() && it->second->count() > 0) continue;
    try {
      assign_config_value(f, key, value);
    } catch (const std::exception& e) {
      throw std::invalid_argument(f.config + ":" + std::to_string(lineno) + ": bad value for '" +
                                  key + "': " + e.what());
    }
  }
}

std::filesystem::path out_path(const Flags& f, const std::string& name) {
  std::filesystem::create_directories(f.out);
  return std::filesystem::path(f.out) / name;
}

RunSpec spec_from_flags(const Flags& f) {
  RunSpec spec;
  spec.model = parse_model_kind(f.model);
  spec.fn = f.fn;
  spec.dim = f.dim;
  spec.neurons = f.neurons;
  spec.layers = f.layers;
  spec.samples = f.data;
  spec.train.batch_size = f.batch;
  spec.train.max_epochs = f.max_epochs;
  spec.train.patience = f.patience;
  spec.train.seed = f.seed;
  return spec;
}

std::vector<int> fn_list(int fn) {
  if (fn == 0) return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  return {fn};
}

int cmd_train(const Flags& f) {
  const RunSpec spec = spec_from_flags(f);
  std::optional<AnyModel> model;
  const RunResult result = run_one(spec, 0, &model);

  const auto log_path = out_path(f, "train_log.csv");
  const auto model_path = out_path(f, "model.txt");
  write_train_log_csv(result.report, log_path.string());
  save_model(*model, model_path.string());

  std::cout << "trained " << to_string(spec.model) << " on f" << spec.fn << " (dim " << spec.dim
            << "): epochs " << result.epochs << ", sec/epoch " << format_float(result.sec_per_epoch)
            << "\n";
  std::cout << "final val MSE " << format_float(result.final_val_mse) << ", final val RSS "
            << format_float(result.final_val_rss) << ", best val MSE "
            << format_float(result.best_val_mse) << " (epoch " << result.report.best_epoch << ")\n";
  std::cout << "wrote " << log_path.string() << " and " << model_path.string() << "\n";
  return 0;
}

int cmd_scale_dim(Flags f, const OptionMap& opts) {
  if (opts.at("data")->count() == 0) f.data = 16384;
  if (opts.at("batch")->count() == 0) f.batch = 256;
  if (opts.at("neurons")->count() == 0) f.neurons = 20;

  const RunSpec base = spec_from_flags(f);
  const ScaleDimResult result =
      run_scale_dim(fn_list(f.fn), {2, 3, 4, 5}, base, f.reps);
  const auto path = out_path(f, "scale_dim.csv");
  write_scale_dim_csv(result, path.string());

  std::cout << "sec/epoch medians over dims 2..5:";
  for (double s : result.median_sec) std::cout << " " << format_float(s);
  std::cout << "\nlinear fit: slope " << format_float(result.fit.slope) << ", R^2 "
            << format_float(result.fit.r2) << "\n";
  std::cout << "wrote " << path.string() << "\n";
  return 0;
}

int cmd_compare_grbfnn(Flags f, const OptionMap& opts) {
  if (opts.at("dim")->count() == 0) f.dim = 3;
  if (f.dim != 2 && f.dim != 3) throw std::invalid_argument("compare-grbfnn expects --dim 2 or 3");
  if (opts.at("neurons")->count() == 0) f.neurons = 10;
  if (opts.at("data")->count() == 0) f.data = f.dim == 2 ? 1024 : 2048;
  if (opts.at("batch")->count() == 0) f.batch = 64;

  std::vector<RunSpec> specs;
  for (int fn : fn_list(f.fn)) {
    RunSpec sg = spec_from_flags(f);
    sg.model = ModelKind::Sgnn;
    sg.fn = fn;
    RunSpec gr = sg;
    gr.model = ModelKind::Grbfnn;
    gr.neurons = grbfnn_counts(f.dim, f.neurons).weights_only;  // N^d units
    specs.push_back(sg);
    specs.push_back(gr);
  }
  const auto rows = run_matrix(specs, f.reps);
  const auto aggregates = aggregate_rows(rows, f.reps);
  const auto runs_path = out_path(f, "compare_grbfnn_runs.csv");
  const auto summary_path = out_path(f, "compare_grbfnn_summary.csv");
  write_compare_csv(rows, runs_path.string());
  write_compare_summary_csv(aggregates, summary_path.string());

  for (std::size_t i = 0; i + 1 < aggregates.size(); i += 2) {
    const CompareAggregate& sg = aggregates[i];
    const CompareAggregate& gr = aggregates[i + 1];
    std::cout << "f" << sg.fn << ": sgnn sec/epoch " << format_float(sg.median_sec_per_epoch)
              << " vs grbfnn " << format_float(gr.median_sec_per_epoch) << "; mean final MSE "
              << format_float(sg.mean_final_mse) << " vs " << format_float(gr.mean_final_mse)
              << "\n";
  }
  std::cout << "wrote " << runs_path.string() << " and " << summary_path.string() << "\n";
  return 0;
}

int cmd_compare_mlp(Flags f, const OptionMap& opts) {
  if (opts.at("dim")->count() == 0) f.dim = 4;
  if (opts.at("data")->count() == 0) f.data = 16384;
  if (opts.at("batch")->count() == 0) f.batch = 256;
  if (opts.at("fn")->count() == 0) f.fn = 5;
  if (opts.at("layers")->count() == 0) f.layers = 4;

  std::vector<RunSpec> specs;
  for (int fn : fn_list(f.fn)) {
    RunSpec sg = spec_from_flags(f);
    sg.model = ModelKind::Sgnn;
    sg.fn = fn;
    sg.layers = 0;  // layer count is fixed by the dimension
    RunSpec relu = spec_from_flags(f);
    relu.model = ModelKind::Relu;
    relu.fn = fn;
    RunSpec sigm = relu;
    sigm.model = ModelKind::Sigmoid;
    specs.push_back(sg);
    specs.push_back(relu);
    specs.push_back(sigm);
  }
  const auto rows = run_matrix(specs, f.reps);
  const auto aggregates = aggregate_rows(rows, f.reps);
  const auto runs_path = out_path(f, "compare_mlp_runs.csv");
  const auto summary_path = out_path(f, "compare_mlp_summary.csv");
  write_compare_csv(rows, runs_path.string());
  write_compare_summary_csv(aggregates, summary_path.string());

  for (const CompareAggregate& agg : aggregates) {
    std::cout << to_string(agg.model) << " f" << agg.fn << " (" << agg.layers << "x" << agg.neurons
              << ", " << agg.params << " params): mean final MSE "
              << format_float(agg.mean_final_mse) << ", median sec/epoch "
              << format_float(agg.median_sec_per_epoch) << "\n";
  }
  std::cout << "wrote " << runs_path.string() << " and " << summary_path.string() << "\n";
  return 0;
}

int cmd_surface(const Flags& f) {
  if (f.model_file.empty()) throw std::invalid_argument("surface requires --model-file");
  const AnyModel model = load_model(f.model_file);
  const CandidateFunction fn = make_candidate(f.fn, model_dim(model));
  const auto path = out_path(f, "surface.csv");
  const SurfaceReport report =
      write_surface_csv(model, fn, f.grid_n, -8.0, 8.0, path.string());

  std::cout << "wrote " << path.string() << " (" << f.grid_n * f.grid_n << " grid rows)\n";
  std::cout << "max |prediction - truth| = " << format_float(report.max_abs_error) << " at ("
            << format_float(report.worst_x1) << ", " << format_float(report.worst_x2) << ")"
            << (report.worst_on_boundary ? " on the boundary ring" : " in the interior") << "\n";
  return 0;
}

int cmd_gradcheck(const Flags& f, const OptionMap& opts) {
  const std::size_t per_family = opts.at("reps")->count() ? f.reps : 24;
  const GradcheckReport report = run_gradcheck(per_family, f.seed);
  std::cout << "gradcheck (" << per_family << " models per family, h=1e-5):\n";
  std::cout << "  sgnn    max rel " << format_float(report.max_rel_sgnn) << "\n";
  std::cout << "  grbfnn  max rel " << format_float(report.max_rel_grbfnn) << "\n";
  std::cout << "  mlp     max rel " << format_float(report.max_rel_mlp) << "\n";
  if (report.max_rel() > 1e-5) {
    std::cout << "FAIL: tolerance 1e-5 exceeded\n";
    return 1;
  }
  std::cout << "PASS (" << format_float(report.seconds) << " s)\n";
  return 0;
}

int cmd_equivalence(const Flags& f, const OptionMap& opts) {
  const std::size_t cases = opts.at("reps")->count() ? f.reps : 50;
  const std::size_t points = opts.at("data")->count() ? f.data : 1000;
  const EquivalenceReport report = run_equivalence(cases, points, f.seed);
  std::cout << "equivalence: " << report.cases << " random models, " << points
            << " points each, max rel diff " << format_float(report.max_rel_error) << "\n";
  if (report.max_rel_error > 1e-9) {
    std::cout << "FAIL: tolerance 1e-9 exceeded (case " << report.worst_case << ", dim "
              << report.worst_dim << ")\n";
    return 1;
  }
  std::cout << "PASS (" << format_float(report.seconds) << " s)\n";
  return 0;
}

int cmd_hessian(Flags f, const OptionMap& opts) {
  if (opts.at("dim")->count() == 0) f.dim = 3;
  if (opts.at("neurons")->count() == 0) f.neurons = 3;
  if (opts.at("data")->count() == 0) f.data = 200;
  const HessianToyReport report = run_hessian_toy(f.dim, f.neurons, f.data, f.seed);
  const auto path = out_path(f, "spectrum.csv");
  write_spectrum_csv(report.bundle, path.string());

  const double split_rel =
      report.projected_norm == 0.0 ? 0.0 : report.split_error / report.projected_norm;
  const double psd_floor = -1e-9 * std::max(1.0, report.max_projected_eigenvalue);
  std::cout << "hessian toy (dim " << f.dim << ", " << f.neurons << " neurons/layer, " << f.data
            << " samples):\n";
  std::cout << "  projection vs dense triple product: rel " << format_float(report.identity_rel_error)
            << "\n";
  std::cout << "  eigen-split rebuild: rel " << format_float(split_rel) << "\n";
  std::cout << "  projected eigenvalues in [" << format_float(report.min_projected_eigenvalue)
            << ", " << format_float(report.max_projected_eigenvalue) << "]\n";
  std::cout << "wrote " << path.string() << "\n";
  if (report.identity_rel_error > 1e-10 || split_rel > 1e-8 ||
      report.min_projected_eigenvalue < psd_floor) {
    std::cout << "FAIL: hessian tolerances exceeded\n";
    return 1;
  }
  std::cout << "PASS (" << format_float(report.seconds) << " s)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"separable Gaussian network benchmark harness"};
  app.require_subcommand(1);

  Flags f;
  CLI::App* train_cmd = app.add_subcommand("train", "train one model, write log + model file");
  CLI::App* scale_cmd = app.add_subcommand("scale-dim", "SGNN cost/accuracy across dims 2..5");
  CLI::App* cg_cmd = app.add_subcommand("compare-grbfnn", "SGNN vs full-grid GRBFNN");
  CLI::App* cm_cmd = app.add_subcommand("compare-mlp", "SGNN vs ReLU/Sigmoid MLPs");
  CLI::App* surface_cmd = app.add_subcommand("surface", "x1-x2 prediction grid for a saved model");
  CLI::App* grad_cmd = app.add_subcommand("gradcheck", "analytic vs finite-difference gradients");
  CLI::App* equiv_cmd = app.add_subcommand("equivalence", "SGNN vs expanded GRBFNN outputs");
  CLI::App* hess_cmd = app.add_subcommand("hessian", "projected-Hessian algebra checks");

  std::map<const CLI::App*, OptionMap> opts;
  for (CLI::App* cmd :
       {train_cmd, scale_cmd, cg_cmd, cm_cmd, surface_cmd, grad_cmd, equiv_cmd, hess_cmd}) {
    opts[cmd] = add_common(cmd, f);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    CLI::App* cmd = app.get_subcommands().front();
    apply_config(f, opts.at(cmd));
    if (cmd == train_cmd) return cmd_train(f);
    if (cmd == scale_cmd) return cmd_scale_dim(f, opts.at(cmd));
    if (cmd == cg_cmd) return cmd_compare_grbfnn(f, opts.at(cmd));
    if (cmd == cm_cmd) return cmd_compare_mlp(f, opts.at(cmd));
    if (cmd == surface_cmd) return cmd_surface(f);
    if (cmd == grad_cmd) return cmd_gradcheck(f, opts.at(cmd));
    if (cmd == equiv_cmd) return cmd_equivalence(f, opts.at(cmd));
    if (cmd == hess_cmd) return cmd_hessian(f, opts.at(cmd));
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
