#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kergraph/consensus_solver.hpp"
#include "kergraph/dataset.hpp"
#include "kergraph/eval_metrics.hpp"

namespace kergraph {

struct ExperimentConfig {
  std::string dataset_path;
  DatasetFormat format = DatasetFormat::dense_csv;
  bool has_header = false;
  LabelSpec label_spec;
  std::string labels_path;  // separate label file, one label per line

  std::vector<KernelSpec> kernel_specs;  // empty = standard 12-kernel recipe
  SolverConfig solver;
  int k = 2;
  int restarts = 20;
  std::uint64_t cluster_seed = 0;
  bool scale = false;

  std::string out_dir;
  std::string cache_path;  // read kernels from here when hash matches
  bool write_trace = false;
  bool write_graph = false;
};

struct ClusteringReport {
  std::vector<int> labels;
  std::optional<MetricReport> metrics;
  Eigen::VectorXd g;
  bool converged = false;
  int iterations = 0;
  double final_res_jz = 0.0;
  double final_res_wk = 0.0;
  SolverMode mode = SolverMode::multi_kernel;
  Regularizer regularizer = Regularizer::lowrank;
  std::size_t r = 0;
  int k = 0;
  Eigen::Index n = 0;
  SolverConfig solver;
  std::vector<std::string> provenance;
  bool near_degenerate_spectrum = false;

  // carried for write_report
  Eigen::MatrixXd Z;
  std::vector<TraceRow> trace;
  std::uint64_t data_hash = 0;
  bool write_trace_requested = false;
  bool write_graph_requested = false;
};

struct GridSpec {
  std::vector<double> alphas;
  std::vector<double> betas;
  std::vector<double> gammas;

  // alpha in {1e-5, 1e-2}; beta, gamma in {1e-5, 1e-3, 1e-1, 10, 1e3, 1e5}.
  static GridSpec paper_default();
  std::size_t size() const {
    return alphas.size() * betas.size() * gammas.size();
  }
};

struct GridRow {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double acc = 0.0;
  double nmi = 0.0;
  int iterations = 0;
  bool converged = false;
  std::string error;  // nonempty when the tuple failed
};

/// Full pipeline: bank -> solve -> cluster_graph -> metrics (when labels are
/// available). Does not touch the filesystem except for dataset/cache reads.
ClusteringReport run_experiment(const ExperimentConfig& config);

/// One row per (alpha, beta, gamma) tuple in canonical order. Tuples run on
/// a KERGRAPH_THREADS-capped pool; a failing tuple yields an error row.
/// `order` optionally permutes execution (results stay in canonical order).
std::vector<GridRow> grid_search(const ExperimentConfig& config,
                                 const GridSpec& grid,
                                 const std::vector<std::size_t>& order = {});

/// Writes report.json, labels.csv, optional trace.csv and graph.bin under
/// dir; returns the written paths. Timestamps go to a run_meta.json sidecar
/// so report.json stays byte-stable.
std::vector<std::string> write_report(const ClusteringReport& report,
                                      const std::string& dir);

void write_grid_csv(const std::vector<GridRow>& rows, const std::string& path);

std::string report_to_json(const ClusteringReport& report);

}  // namespace kergraph
