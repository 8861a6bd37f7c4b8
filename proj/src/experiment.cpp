#include "kergraph/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <thread>

#include <json.hpp>

#include "kergraph/errors.hpp"
#include "kergraph/matrix_io.hpp"
#include "kergraph/spectral_clustering.hpp"

namespace kergraph {

using nlohmann::json;

GridSpec GridSpec::paper_default() {
  GridSpec grid;
  grid.alphas = {1e-5, 1e-2};
  grid.betas = {1e-5, 1e-3, 1e-1, 10.0, 1e3, 1e5};
  grid.gammas = grid.betas;
  return grid;
}

namespace {

struct LoadedData {
  KernelBank bank;
  std::optional<std::vector<int>> labels;
  std::uint64_t hash = 0;
};

LoadedData prepare_inputs(const ExperimentConfig& config) {
  Dataset ds = load_dataset(config.dataset_path, config.format,
                            config.label_spec, config.has_header);
  if (!config.labels_path.empty())
    ds.labels = load_labels_file(config.labels_path);
  if (config.scale) scale_features(ds.X);

  LoadedData data;
  data.hash = dataset_hash(ds.X);
  data.labels = std::move(ds.labels);

  if (!config.cache_path.empty() &&
      std::filesystem::exists(config.cache_path)) {
    std::uint64_t cached_hash = 0;
    KernelBank cached = load_bank(config.cache_path, &cached_hash);
    if (cached_hash == data.hash) {
      data.bank = std::move(cached);
      return data;
    }
  }

  data.bank = config.kernel_specs.empty()
                  ? build_standard_bank(ds.X)
                  : build_bank(ds.X, config.kernel_specs);
  if (!config.cache_path.empty())
    save_bank(config.cache_path, data.bank, data.hash);
  return data;
}

int pool_size(std::size_t jobs) {
  unsigned n = std::thread::hardware_concurrency();
  if (n == 0) n = 1;
  if (const char* cap = std::getenv("KERGRAPH_THREADS")) {
    const long parsed = std::strtol(cap, nullptr, 10);
    if (parsed >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(parsed));
  }
  return static_cast<int>(std::min<std::size_t>(n, jobs));
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json metrics_to_json(const MetricReport& m) {
  return json{{"acc", m.acc},
              {"nmi", m.nmi},
              {"f_score", m.f_score},
              {"precision", m.precision},
              {"recall", m.recall},
              {"ari", m.ari},
              {"purity", m.purity},
              {"entropy", m.entropy},
              {"entropy_raw", m.entropy_raw}};
}

}  // namespace

ClusteringReport run_experiment(const ExperimentConfig& config) {
  if (config.k < 2) throw Error("experiment requires k >= 2");
  config.solver.validate();

  LoadedData data;
  try {
    data = prepare_inputs(config);
  } catch (const Error& e) {
    throw Error(std::string("input stage: ") + e.what());
  }

  SolverOutput solved;
  try {
    solved = solve(data.bank, config.solver);
  } catch (const Error& e) {
    throw Error(std::string("solver stage: ") + e.what());
  }

  ClusteringReport report;
  report.solver = config.solver;
  report.mode = config.solver.mode;
  report.regularizer = config.solver.regularizer;
  report.r = data.bank.size();
  report.k = config.k;
  report.n = data.bank.n();
  report.g = solved.g;
  report.converged = solved.converged;
  report.iterations = solved.iterations;
  if (!solved.trace.empty()) {
    report.final_res_jz = solved.trace.back().res_JZ;
    report.final_res_wk = solved.trace.back().res_WK;
  }
  report.provenance = data.bank.provenance_log;
  report.Z = solved.Z;
  report.trace = std::move(solved.trace);
  report.data_hash = data.hash;
  report.write_trace_requested = config.write_trace;
  report.write_graph_requested = config.write_graph;

  try {
    const AffinityGraph graph = symmetrize_affinity(solved.Z);
    const SpectralEmbedding emb = spectral_embed(graph, config.k);
    report.near_degenerate_spectrum = emb.near_degenerate;
    report.labels =
        kmeans(emb.coords, config.k, config.restarts, config.cluster_seed)
            .labels;
  } catch (const Error& e) {
    throw Error(std::string("clustering stage: ") + e.what());
  }

  if (data.labels) {
    if (data.labels->size() != report.labels.size())
      throw LengthMismatchError("ground-truth labels do not match dataset");
    report.metrics = extended_metrics(*data.labels, report.labels);
  }
  return report;
}

std::vector<GridRow> grid_search(const ExperimentConfig& config,
                                 const GridSpec& grid,
                                 const std::vector<std::size_t>& order) {
  if (grid.alphas.empty() || grid.betas.empty() || grid.gammas.empty())
    throw Error("grid lists must be nonempty");
  for (double v : grid.alphas)
    if (!(v > 0)) throw Error("grid values must be positive");
  for (double v : grid.betas)
    if (!(v > 0)) throw Error("grid values must be positive");
  for (double v : grid.gammas)
    if (!(v > 0)) throw Error("grid values must be positive");

  const LoadedData data = prepare_inputs(config);
  if (!data.labels)
    throw Error("grid search scores against ground truth; labels required");

  struct Tuple {
    double alpha, beta, gamma;
  };
  std::vector<Tuple> tuples;
  tuples.reserve(grid.size());
  for (double a : grid.alphas)
    for (double b : grid.betas)
      for (double g : grid.gammas) tuples.push_back({a, b, g});

  std::vector<std::size_t> exec_order(tuples.size());
  if (order.empty()) {
    for (std::size_t i = 0; i < tuples.size(); ++i) exec_order[i] = i;
  } else {
    if (order.size() != tuples.size())
      throw Error("execution order must be a permutation of the grid");
    exec_order = order;
  }

  std::vector<GridRow> rows(tuples.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&]() {
    for (;;) {
      const std::size_t slot = next.fetch_add(1);
      if (slot >= exec_order.size()) return;
      const std::size_t idx = exec_order[slot];
      const Tuple& t = tuples[idx];

      GridRow row;
      row.alpha = t.alpha;
      row.beta = t.beta;
      row.gamma = t.gamma;
      try {
        SolverConfig sc = config.solver;
        sc.alpha = t.alpha;
        sc.beta = t.beta;
        sc.gamma = t.gamma;
        const SolverOutput solved = solve(data.bank, sc);

        ClusterOptions opts;
        opts.restarts = config.restarts;
        opts.seed = config.cluster_seed;
        const std::vector<int> pred =
            cluster_graph(solved.Z, config.k, opts);

        row.acc = accuracy(*data.labels, pred);
        row.nmi = nmi(*data.labels, pred);
        row.iterations = solved.iterations;
        row.converged = solved.converged;
      } catch (const std::exception& e) {
        row.error = e.what();
        row.acc = std::numeric_limits<double>::quiet_NaN();
        row.nmi = std::numeric_limits<double>::quiet_NaN();
      }
      rows[idx] = std::move(row);
    }
  };

  const int threads = pool_size(tuples.size());
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return rows;
}

std::string report_to_json(const ClusteringReport& report) {
  json j;
  j["mode"] = report.mode == SolverMode::multi_kernel ? "multi_kernel"
                                                      : "fixed_kernel";
  j["regularizer"] =
      report.regularizer == Regularizer::sparse ? "sparse" : "lowrank";
  j["r"] = report.r;
  j["k"] = report.k;
  j["n"] = report.n;
  j["alpha"] = report.solver.alpha;
  j["beta"] = report.solver.beta;
  j["gamma"] = report.solver.gamma;
  j["mu"] = report.solver.mu;
  j["tol"] = report.solver.tol;
  j["max_iter"] = report.solver.max_iter;
  j["seed"] = report.solver.seed;
  j["converged"] = report.converged;
  j["iterations"] = report.iterations;
  j["final_res_jz"] = report.final_res_jz;
  j["final_res_wk"] = report.final_res_wk;
  j["g"] = std::vector<double>(report.g.data(),
                               report.g.data() + report.g.size());
  j["labels"] = report.labels;
  if (report.metrics) j["metrics"] = metrics_to_json(*report.metrics);
  j["near_degenerate_spectrum"] = report.near_degenerate_spectrum;
  j["provenance"] = report.provenance;
  return j.dump(2);
}

std::vector<std::string> write_report(const ClusteringReport& report,
                                      const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory: " + dir);

  std::vector<std::string> written;
  const auto emit = [&](const std::string& name, const std::string& body) {
    const std::string path = (std::filesystem::path(dir) / name).string();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << body;
    written.push_back(path);
  };

  emit("report.json", report_to_json(report));

  {
    std::string csv = "label\n";
    for (int label : report.labels) csv += std::to_string(label) + "\n";
    emit("labels.csv", csv);
  }

  if (report.write_trace_requested && !report.trace.empty()) {
    std::string csv = "iter,res_JZ,res_WK,lagrangian";
    for (Eigen::Index i = 0; i < report.g.size(); ++i)
      csv += ",g_" + std::to_string(i + 1);
    csv += "\n";
    for (const TraceRow& row : report.trace) {
      csv += std::to_string(row.iter) + "," + format_double(row.res_JZ) +
             "," + format_double(row.res_WK) + "," +
             format_double(row.lagrangian);
      for (Eigen::Index i = 0; i < row.g.size(); ++i)
        csv += "," + format_double(row.g[i]);
      csv += "\n";
    }
    emit("trace.csv", csv);
  }

  if (report.write_graph_requested && report.Z.size() > 0) {
    const std::string path =
        (std::filesystem::path(dir) / "graph.bin").string();
    write_matrix_file(path, {&report.Z}, {"{\"kind\":\"graph\"}"},
                      report.data_hash);
    written.push_back(path);
  }

  {
    const auto now = std::chrono::system_clock::now().time_since_epoch();
    json meta;
    meta["written_unix_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(now).count();
    const std::string path =
        (std::filesystem::path(dir) / "run_meta.json").string();
    std::ofstream out(path);
    out << meta.dump(2);
    written.push_back(path);
  }
  return written;
}

void write_grid_csv(const std::vector<GridRow>& rows,
                    const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << "alpha,beta,gamma,acc,nmi,iterations,converged\n";
  for (const GridRow& row : rows) {
    out << format_double(row.alpha) << ',' << format_double(row.beta) << ','
        << format_double(row.gamma) << ',' << format_double(row.acc) << ','
        << format_double(row.nmi) << ',' << row.iterations << ','
        << (row.error.empty() ? (row.converged ? "true" : "false") : "error")
        << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace kergraph
