#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace kergraph {

struct AffinityGraph {
  Eigen::MatrixXd A;       // symmetric, nonnegative
  Eigen::VectorXd degree;  // row sums
};

struct SpectralEmbedding {
  Eigen::MatrixXd coords;      // n x k, rows of unit (or zero) norm
  Eigen::VectorXd eigenvalues; // k smallest eigenvalues of L_sym
  std::vector<Eigen::Index> zero_rows;
  // Gap between the k-th and (k+1)-th eigenvalue is within eigensolver
  // noise; label assignments near such ties are seed-sensitive.
  bool near_degenerate = false;
};

struct KMeansResult {
  std::vector<int> labels;
  double wcss = 0.0;
};

struct ClusterOptions {
  int restarts = 20;
  std::uint64_t seed = 0;
  int max_sweeps = 100;
};

/// A = (Z + Z')/2. Entries of Z in [-1e-12, 0) are treated as rounding noise
/// and clamped; anything lower is an error.
AffinityGraph symmetrize_affinity(const Eigen::MatrixXd& Z);

/// Row-normalized eigenvectors of the k smallest eigenvalues of
/// L_sym = I - D^{-1/2} A D^{-1/2}; isolated vertices get D^{-1/2} = 0.
SpectralEmbedding spectral_embed(const AffinityGraph& graph, int k);

/// Lloyd iterations with distance-weighted seeding; best of `restarts` runs
/// by within-cluster sum of squares, deterministic given seed. Empty
/// clusters are reseeded to the point farthest from its center.
KMeansResult kmeans(const Eigen::MatrixXd& points, int k, int restarts,
                    std::uint64_t seed, int max_sweeps = 100);

/// symmetrize -> embed -> kmeans.
std::vector<int> cluster_graph(const Eigen::MatrixXd& Z, int k,
                               const ClusterOptions& opts = {});

}  // namespace kergraph
