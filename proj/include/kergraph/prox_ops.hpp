#pragma once

#include <Eigen/Dense>

namespace kergraph {

/// SVD factors kept by svt for callers that need the thresholded spectrum.
struct ThresholdedSVD {
  Eigen::MatrixXd U;
  Eigen::VectorXd sigma;  // original singular values, nonincreasing
  Eigen::MatrixXd V;
  double threshold = 0.0;

  Eigen::VectorXd shrunk() const {
    return (sigma.array() - threshold).max(0.0).matrix();
  }
};

/// Elementwise shrinkage: max(|d| - tau, 0) * sign(d). Prox of tau*||.||_1.
Eigen::MatrixXd soft_threshold(const Eigen::MatrixXd& D, double tau);

/// Singular value thresholding: prox of tau*||.||_*.
Eigen::MatrixXd svt(const Eigen::MatrixXd& G, double tau);
Eigen::MatrixXd svt(const Eigen::MatrixXd& G, double tau,
                    ThresholdedSVD& factors);

/// Elementwise max(M, 0).
Eigen::MatrixXd project_nonneg(const Eigen::MatrixXd& M);

/// Euclidean projection onto {g : g_i >= 0, sum g_i = 1}, exact sort-based
/// algorithm.
Eigen::VectorXd project_simplex(const Eigen::VectorXd& v);

}  // namespace kergraph
