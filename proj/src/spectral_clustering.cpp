#include "kergraph/spectral_clustering.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <random>

#include "kergraph/errors.hpp"
#include "kergraph/simd/simd_ops.hpp"

namespace kergraph {

AffinityGraph symmetrize_affinity(const Eigen::MatrixXd& Z) {
  if (Z.rows() != Z.cols())
    throw DimensionMismatchError("affinity input must be square");
  if ((Z.array() < -1e-12).any())
    throw NegativeInputError("affinity input has negative entries");

  AffinityGraph graph;
  graph.A = 0.5 * (Z + Z.transpose());
  simd::clip_nonneg(graph.A.data(), static_cast<std::size_t>(graph.A.size()));
  graph.degree = graph.A.rowwise().sum();
  return graph;
}

SpectralEmbedding spectral_embed(const AffinityGraph& graph, int k) {
  const Eigen::Index n = graph.A.rows();
  if (k < 2 || k > n) throw Error("spectral_embed requires 2 <= k <= n");

  Eigen::VectorXd d_inv_sqrt(n);
  for (Eigen::Index i = 0; i < n; ++i)
    d_inv_sqrt[i] = graph.degree[i] > 0.0
                        ? 1.0 / std::sqrt(graph.degree[i])
                        : 0.0;

  Eigen::MatrixXd L =
      (d_inv_sqrt.asDiagonal() * graph.A * d_inv_sqrt.asDiagonal()).eval();
  L = -L;
  L.diagonal().array() += 1.0;
  L = 0.5 * (L + L.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(L);
  if (eig.info() != Eigen::Success)
    throw EigenFailureError("Laplacian eigendecomposition did not converge");

  SpectralEmbedding emb;
  emb.eigenvalues = eig.eigenvalues().head(k);
  emb.coords = eig.eigenvectors().leftCols(k);
  if (k < n) {
    const double gap = eig.eigenvalues()[k] - eig.eigenvalues()[k - 1];
    emb.near_degenerate = gap <= 1e-8;
  }

  for (Eigen::Index i = 0; i < n; ++i) {
    const double norm = emb.coords.row(i).norm();
    if (norm > 1e-12)
      emb.coords.row(i) /= norm;
    else {
      emb.coords.row(i).setZero();
      emb.zero_rows.push_back(i);
    }
  }
  return emb;
}

namespace {

// One seeded Lloyd run. Seeding is distance-weighted (each next center drawn
// proportional to squared distance from the chosen set), so the run depends
// on the point cloud only through pairwise distances.
KMeansResult lloyd_run(const Eigen::MatrixXd& points, int k,
                       std::mt19937_64& rng, int max_sweeps) {
  const Eigen::Index n = points.rows();
  const Eigen::Index dim = points.cols();
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  Eigen::MatrixXd centers(k, dim);
  Eigen::VectorXd d2 = Eigen::VectorXd::Constant(
      n, std::numeric_limits<double>::infinity());

  const Eigen::Index first =
      std::min<Eigen::Index>(static_cast<Eigen::Index>(unit(rng) * n), n - 1);
  centers.row(0) = points.row(first);
  for (int c = 1; c < k; ++c) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double dist = (points.row(i) - centers.row(c - 1)).squaredNorm();
      if (dist < d2[i]) d2[i] = dist;
      total += d2[i];
    }
    Eigen::Index chosen = 0;
    if (total > 0.0) {
      const double target = unit(rng) * total;
      double cum = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        cum += d2[i];
        if (cum >= target) {
          chosen = i;
          break;
        }
      }
    } else {
      chosen = std::min<Eigen::Index>(
          static_cast<Eigen::Index>(unit(rng) * n), n - 1);
    }
    centers.row(c) = points.row(chosen);
  }

  KMeansResult result;
  result.labels.assign(static_cast<std::size_t>(n), 0);
  std::vector<Eigen::Index> counts(static_cast<std::size_t>(k), 0);

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool changed = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      int best = 0;
      double best_d = (points.row(i) - centers.row(0)).squaredNorm();
      for (int c = 1; c < k; ++c) {
        const double dist = (points.row(i) - centers.row(c)).squaredNorm();
        if (dist < best_d) {
          best_d = dist;
          best = c;
        }
      }
      if (result.labels[static_cast<std::size_t>(i)] != best) {
        result.labels[static_cast<std::size_t>(i)] = best;
        changed = true;
      }
    }
    if (sweep > 0 && !changed) break;

    centers.setZero();
    std::fill(counts.begin(), counts.end(), 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      centers.row(result.labels[static_cast<std::size_t>(i)]) += points.row(i);
      ++counts[static_cast<std::size_t>(
          result.labels[static_cast<std::size_t>(i)])];
    }
    std::vector<int> empties;
    for (int c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0)
        centers.row(c) /=
            static_cast<double>(counts[static_cast<std::size_t>(c)]);
      else
        empties.push_back(c);
    }
    // Reseed empty clusters at the point farthest from its own center;
    // every label points at a non-empty (already divided) cluster here.
    for (int c : empties) {
      Eigen::Index far = 0;
      double far_d = -1.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const double dist =
            (points.row(i) -
             centers.row(result.labels[static_cast<std::size_t>(i)]))
                .squaredNorm();
        if (dist > far_d) {
          far_d = dist;
          far = i;
        }
      }
      centers.row(c) = points.row(far);
      result.labels[static_cast<std::size_t>(far)] = c;
      changed = true;
    }
  }

  result.wcss = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    result.wcss +=
        (points.row(i) -
         centers.row(result.labels[static_cast<std::size_t>(i)]))
            .squaredNorm();
  return result;
}

}  // namespace

KMeansResult kmeans(const Eigen::MatrixXd& points, int k, int restarts,
                    std::uint64_t seed, int max_sweeps) {
  const Eigen::Index n = points.rows();
  if (k < 1 || static_cast<Eigen::Index>(k) > n)
    throw Error("kmeans requires 1 <= k <= n");
  if (restarts < 1) throw Error("kmeans requires restarts >= 1");

  std::mt19937_64 rng(seed);
  KMeansResult best;
  best.wcss = std::numeric_limits<double>::infinity();
  for (int rs = 0; rs < restarts; ++rs) {
    KMeansResult run = lloyd_run(points, k, rng, max_sweeps);
    if (run.wcss < best.wcss) best = std::move(run);
  }
  return best;
}

std::vector<int> cluster_graph(const Eigen::MatrixXd& Z, int k,
                               const ClusterOptions& opts) {
  const AffinityGraph graph = symmetrize_affinity(Z);
  const SpectralEmbedding emb = spectral_embed(graph, k);
  return kmeans(emb.coords, k, opts.restarts, opts.seed, opts.max_sweeps)
      .labels;
}

}  // namespace kergraph
