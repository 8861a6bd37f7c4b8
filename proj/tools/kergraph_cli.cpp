// kergraph: learn a consensus kernel and similarity graph from data, then
// cluster the graph spectrally.
//
//   kergraph build-kernels --data X.csv --out kernels.bin
//   kergraph cluster --data X.csv --k 3 --label-col label --out results/
//   kergraph grid --data X.csv --k 3 --label-col label --out results/
//   kergraph eval --truth t.csv --pred p.csv

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include <CLI11.hpp>
#include <json.hpp>

#include "kergraph/errors.hpp"
#include "kergraph/experiment.hpp"
#include "kergraph/matrix_io.hpp"
#include "kergraph/simd/simd_ops.hpp"

namespace {

using kergraph::ExperimentConfig;
using nlohmann::json;

struct CommonFlags {
  std::string data;
  std::string format = "dense";
  bool header = false;
  std::string label_col;
  std::string labels_file;
  std::string config_file;
  bool scale = false;

  double alpha = 1e-2, beta = 1e-1, gamma = 10.0, mu = 1.0;
  std::string reg = "lowrank";
  std::string mode = "multi";
  int k = 2;
  int restarts = 20;
  std::uint64_t seed = 0;
  double tol = 1e-5;
  int max_iter = 300;
  bool fixed_mu = false;
  std::string out;
  std::string cache;
  bool trace = false;
  bool emit_graph = false;
};

void add_dataset_flags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--data", flags.data, "dataset CSV path");
  cmd->add_option("--format", flags.format, "dense | sparse")
      ->check(CLI::IsMember({"dense", "sparse"}));
  cmd->add_flag("--header", flags.header, "first row is a header");
  cmd->add_option("--label-col", flags.label_col,
                  "label column (NAME with --header, or INDEX)");
  cmd->add_option("--labels", flags.labels_file,
                  "separate labels file, one per line");
  cmd->add_flag("--scale", flags.scale, "z-score features before kernels");
  cmd->add_option("--config", flags.config_file,
                  "JSON config (flags given on the command line win)");
  cmd->add_option("--cache", flags.cache, "kernel cache file path");
}

void add_solver_flags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--alpha", flags.alpha, "graph regularization weight");
  cmd->add_option("--beta", flags.beta, "nuclear-norm weight on K");
  cmd->add_option("--gamma", flags.gamma, "kernel-neighborhood weight");
  cmd->add_option("--mu", flags.mu, "ADMM penalty");
  cmd->add_option("--reg", flags.reg, "sparse | lowrank")
      ->check(CLI::IsMember({"sparse", "lowrank"}));
  cmd->add_option("--mode", flags.mode, "multi | fixed")
      ->check(CLI::IsMember({"multi", "fixed"}));
  cmd->add_option("--k", flags.k, "number of clusters");
  cmd->add_option("--restarts", flags.restarts, "k-means restarts");
  cmd->add_option("--seed", flags.seed, "RNG seed");
  cmd->add_option("--tol", flags.tol, "relative primal residual tolerance");
  cmd->add_option("--max-iter", flags.max_iter, "ADMM iteration cap");
  cmd->add_flag("--fixed-mu", flags.fixed_mu,
                "hold mu constant instead of the 1.1x growth schedule");
}

void apply_config_file(const CLI::App* cmd, CommonFlags& flags) {
  if (flags.config_file.empty()) return;
  std::ifstream in(flags.config_file);
  if (!in)
    throw kergraph::IoError("cannot open config file: " + flags.config_file);
  json j;
  in >> j;

  // JSON supplies values only where the command line left the default.
  auto absent = [&cmd](const std::string& name) {
    const CLI::Option* opt = cmd->get_option_no_throw(name);
    return opt == nullptr || opt->count() == 0;
  };
  auto set_if = [&](const char* flag, const char* key, auto& target) {
    if (j.contains(key) && absent(flag)) j.at(key).get_to(target);
  };
  set_if("--data", "dataset", flags.data);
  set_if("--format", "format", flags.format);
  set_if("--header", "header", flags.header);
  set_if("--label-col", "label_col", flags.label_col);
  set_if("--labels", "labels", flags.labels_file);
  set_if("--scale", "scale", flags.scale);
  set_if("--alpha", "alpha", flags.alpha);
  set_if("--beta", "beta", flags.beta);
  set_if("--gamma", "gamma", flags.gamma);
  set_if("--mu", "mu", flags.mu);
  set_if("--reg", "reg", flags.reg);
  set_if("--mode", "mode", flags.mode);
  set_if("--k", "k", flags.k);
  set_if("--restarts", "restarts", flags.restarts);
  set_if("--seed", "seed", flags.seed);
  set_if("--tol", "tol", flags.tol);
  set_if("--max-iter", "max_iter", flags.max_iter);
  set_if("--fixed-mu", "fixed_mu", flags.fixed_mu);
  set_if("--out", "out", flags.out);
  set_if("--cache", "cache", flags.cache);
  set_if("--trace", "trace", flags.trace);
  set_if("--emit-graph", "emit_graph", flags.emit_graph);
}

ExperimentConfig to_experiment_config(const CommonFlags& flags) {
  ExperimentConfig config;
  config.dataset_path = flags.data;
  config.format = flags.format == "sparse"
                      ? kergraph::DatasetFormat::sparse_triplet
                      : kergraph::DatasetFormat::dense_csv;
  config.has_header = flags.header;
  if (!flags.label_col.empty()) {
    char* end = nullptr;
    const long idx = std::strtol(flags.label_col.c_str(), &end, 10);
    config.label_spec = (end && *end == '\0')
                            ? kergraph::LabelSpec::by_index(static_cast<int>(idx))
                            : kergraph::LabelSpec::by_name(flags.label_col);
  }
  config.labels_path = flags.labels_file;
  config.scale = flags.scale;
  config.solver.alpha = flags.alpha;
  config.solver.beta = flags.beta;
  config.solver.gamma = flags.gamma;
  config.solver.mu = flags.mu;
  config.solver.regularizer = flags.reg == "sparse"
                                  ? kergraph::Regularizer::sparse
                                  : kergraph::Regularizer::lowrank;
  config.solver.mode = flags.mode == "fixed"
                           ? kergraph::SolverMode::fixed_kernel
                           : kergraph::SolverMode::multi_kernel;
  config.solver.adaptive_mu = !flags.fixed_mu;
  config.solver.tol = flags.tol;
  config.solver.max_iter = flags.max_iter;
  config.solver.seed = flags.seed;
  config.k = flags.k;
  config.restarts = flags.restarts;
  config.cluster_seed = flags.seed;
  config.out_dir = flags.out;
  config.cache_path = flags.cache;
  config.write_trace = flags.trace;
  config.write_graph = flags.emit_graph;
  return config;
}

int cmd_build_kernels(const CommonFlags& flags) {
  if (flags.data.empty() || flags.out.empty())
    throw kergraph::Error("build-kernels requires --data and --out");
  // honor --label-col so the label column is dropped from the features
  const kergraph::ExperimentConfig config = to_experiment_config(flags);
  kergraph::Dataset ds = kergraph::load_dataset(
      config.dataset_path, config.format, config.label_spec,
      config.has_header);
  if (flags.scale) kergraph::scale_features(ds.X);
  const kergraph::KernelBank bank = kergraph::build_standard_bank(ds.X);
  kergraph::save_bank(flags.out, bank, kergraph::dataset_hash(ds.X));
  std::cout << "wrote " << bank.size() << " kernels (n=" << bank.n() << ") to "
            << flags.out << "\n";
  for (const auto& note : bank.provenance_log)
    std::cout << "note: " << note << "\n";
  return 0;
}

int cmd_cluster(const CommonFlags& flags) {
  if (flags.data.empty())
    throw kergraph::Error("cluster requires --data");
  ExperimentConfig config = to_experiment_config(flags);
  const kergraph::ClusteringReport report = kergraph::run_experiment(config);

  std::cout << "converged=" << (report.converged ? "true" : "false")
            << " iterations=" << report.iterations << " simd="
            << kergraph::simd::level_name(kergraph::simd::active_level())
            << "\n";
  if (report.metrics) {
    std::printf("acc=%.4f nmi=%.4f purity=%.4f ari=%.4f\n",
                report.metrics->acc, report.metrics->nmi,
                report.metrics->purity, report.metrics->ari);
  }
  if (!config.out_dir.empty()) {
    for (const auto& path : kergraph::write_report(report, config.out_dir))
      std::cout << "wrote " << path << "\n";
  } else {
    std::cout << kergraph::report_to_json(report) << "\n";
  }
  return 0;
}

int cmd_grid(const CommonFlags& flags, const std::vector<double>& alphas,
             const std::vector<double>& betas,
             const std::vector<double>& gammas, bool shuffle) {
  if (flags.data.empty() || flags.out.empty())
    throw kergraph::Error("grid requires --data and --out");
  ExperimentConfig config = to_experiment_config(flags);

  kergraph::GridSpec grid = kergraph::GridSpec::paper_default();
  if (!alphas.empty()) grid.alphas = alphas;
  if (!betas.empty()) grid.betas = betas;
  if (!gammas.empty()) grid.gammas = gammas;

  std::vector<std::size_t> order;
  if (shuffle) {
    order.resize(grid.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::mt19937_64 rng(flags.seed);
    std::shuffle(order.begin(), order.end(), rng);
  }

  const auto rows = kergraph::grid_search(config, grid, order);
  std::filesystem::create_directories(flags.out);
  const std::string path =
      (std::filesystem::path(flags.out) / "grid.csv").string();
  kergraph::write_grid_csv(rows, path);
  std::cout << "wrote " << rows.size() << " rows to " << path << "\n";
  return 0;
}

int cmd_eval(const std::string& truth_path, const std::string& pred_path,
             const std::string& out_path, bool header) {
  const std::vector<int> truth =
      kergraph::load_labels_file(truth_path, header);
  const std::vector<int> pred = kergraph::load_labels_file(pred_path, header);
  const kergraph::MetricReport m = kergraph::extended_metrics(truth, pred);
  json j{{"acc", m.acc},         {"nmi", m.nmi},
         {"f_score", m.f_score}, {"precision", m.precision},
         {"recall", m.recall},   {"ari", m.ari},
         {"purity", m.purity},   {"entropy", m.entropy},
         {"entropy_raw", m.entropy_raw}};
  if (out_path.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::ofstream out(out_path);
    if (!out) throw kergraph::IoError("cannot write " + out_path);
    out << j.dump(2);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"consensus kernel + graph learning and spectral clustering"};
  app.require_subcommand(1);

  CommonFlags flags;

  CLI::App* build = app.add_subcommand(
      "build-kernels", "construct the 12-kernel bank and cache it");
  add_dataset_flags(build, flags);
  build->add_option("--out", flags.out, "cache file to write");

  CLI::App* cluster =
      app.add_subcommand("cluster", "full pipeline on one dataset");
  add_dataset_flags(cluster, flags);
  add_solver_flags(cluster, flags);
  cluster->add_option("--out", flags.out, "output directory");
  cluster->add_flag("--trace", flags.trace, "write per-iteration trace.csv");
  cluster->add_flag("--emit-graph", flags.emit_graph,
                    "write learned Z as graph.bin");

  std::vector<double> grid_alphas, grid_betas, grid_gammas;
  bool grid_shuffle = false;
  CLI::App* grid = app.add_subcommand(
      "grid", "accuracy surface over an (alpha, beta, gamma) grid");
  add_dataset_flags(grid, flags);
  add_solver_flags(grid, flags);
  grid->add_option("--out", flags.out, "output directory");
  grid->add_option("--alphas", grid_alphas, "override alpha grid values");
  grid->add_option("--betas", grid_betas, "override beta grid values");
  grid->add_option("--gammas", grid_gammas, "override gamma grid values");
  grid->add_flag("--shuffle", grid_shuffle,
                 "execute tuples in shuffled order (rows stay canonical)");

  std::string truth_path, pred_path, eval_out;
  bool eval_header = false;
  CLI::App* eval =
      app.add_subcommand("eval", "score predicted labels against truth");
  eval->add_option("--truth", truth_path, "ground-truth labels file")
      ->required();
  eval->add_option("--pred", pred_path, "predicted labels file")->required();
  eval->add_option("--out", eval_out, "metrics JSON output path");
  eval->add_flag("--header", eval_header, "label files have a header line");

  CLI11_PARSE(app, argc, argv);

  try {
    if (build->parsed()) {
      apply_config_file(build, flags);
      return cmd_build_kernels(flags);
    }
    if (cluster->parsed()) {
      apply_config_file(cluster, flags);
      return cmd_cluster(flags);
    }
    if (grid->parsed()) {
      apply_config_file(grid, flags);
      return cmd_grid(flags, grid_alphas, grid_betas, grid_gammas,
                      grid_shuffle);
    }
    if (eval->parsed())
      return cmd_eval(truth_path, pred_path, eval_out, eval_header);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
