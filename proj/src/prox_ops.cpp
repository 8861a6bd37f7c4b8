#include "kergraph/prox_ops.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <vector>

#include "kergraph/errors.hpp"
#include "kergraph/simd/simd_ops.hpp"

namespace kergraph {

Eigen::MatrixXd soft_threshold(const Eigen::MatrixXd& D, double tau) {
  if (tau < 0.0) throw Error("soft_threshold requires tau >= 0");
  Eigen::MatrixXd out(D.rows(), D.cols());
  simd::soft_threshold(D.data(), static_cast<std::size_t>(D.size()), tau,
                       out.data());
  return out;
}

Eigen::MatrixXd svt(const Eigen::MatrixXd& G, double tau) {
  ThresholdedSVD factors;
  return svt(G, tau, factors);
}

Eigen::MatrixXd svt(const Eigen::MatrixXd& G, double tau,
                    ThresholdedSVD& factors) {
  if (tau < 0.0) throw Error("svt requires tau >= 0");
  if (!G.allFinite()) throw SvdFailureError("svt input is not finite");

  Eigen::BDCSVD<Eigen::MatrixXd> svd(G,
                                     Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success)
    throw SvdFailureError("SVD did not converge");

  factors.U = svd.matrixU();
  factors.V = svd.matrixV();
  factors.sigma = svd.singularValues();
  factors.threshold = tau;

  const Eigen::VectorXd shrunk = factors.shrunk();
  // Drop the dead part of the spectrum before the reconstruction product.
  Eigen::Index rank = 0;
  while (rank < shrunk.size() && shrunk[rank] > 0.0) ++rank;
  if (rank == 0)
    return Eigen::MatrixXd::Zero(G.rows(), G.cols());
  return factors.U.leftCols(rank) * shrunk.head(rank).asDiagonal() *
         factors.V.leftCols(rank).transpose();
}

Eigen::MatrixXd project_nonneg(const Eigen::MatrixXd& M) {
  Eigen::MatrixXd out = M;
  simd::clip_nonneg(out.data(), static_cast<std::size_t>(out.size()));
  return out;
}

Eigen::VectorXd project_simplex(const Eigen::VectorXd& v) {
  const Eigen::Index n = v.size();
  if (n == 0) throw Error("project_simplex requires a nonempty vector");

  std::vector<double> sorted(v.data(), v.data() + n);
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());

  double running = 0.0;
  double theta = sorted[0] - 1.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    running += sorted[static_cast<std::size_t>(j)];
    const double candidate = (running - 1.0) / static_cast<double>(j + 1);
    if (sorted[static_cast<std::size_t>(j)] - candidate > 0.0)
      theta = candidate;
    else
      break;
  }

  Eigen::VectorXd out(n);
  for (Eigen::Index i = 0; i < n; ++i)
    out[i] = std::max(v[i] - theta, 0.0);
  return out;
}

}  // namespace kergraph
