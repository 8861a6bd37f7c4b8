#include "kergraph/kernel_weights.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>

#include "kergraph/errors.hpp"
#include "kergraph/prox_ops.hpp"
#include "kergraph/simd/simd_ops.hpp"

namespace kergraph {

namespace {

// Tr(A B) for symmetric B reduces to the Frobenius inner product.
double trace_product_sym(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
  return simd::dot(A.data(), B.data(), static_cast<std::size_t>(A.size()));
}

// KKT residual for min gamma*g'Mg - a'g on the simplex: the gradient must be
// constant on the support and no smaller off it.
double kkt_residual(const Eigen::VectorXd& g, const Eigen::VectorXd& grad) {
  double support_min = std::numeric_limits<double>::infinity();
  double support_max = -std::numeric_limits<double>::infinity();
  double zero_min = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    if (g[i] > 0.0) {
      support_min = std::min(support_min, grad[i]);
      support_max = std::max(support_max, grad[i]);
    } else {
      zero_min = std::min(zero_min, grad[i]);
    }
  }
  double resid = support_max - support_min;
  if (std::isfinite(zero_min))
    resid = std::max(resid, support_min - zero_min);
  return std::max(resid, 0.0);
}

}  // namespace

WeightQP build_qp_coefficients(const KernelBank& bank, const Eigen::MatrixXd& K,
                               double gamma, bool paper_linear_term) {
  const std::size_t r = bank.size();
  if (r == 0) throw DimensionMismatchError("empty kernel bank");
  if (!(gamma > 0.0)) throw Error("gamma must be positive");
  const Eigen::Index n = bank.n();
  if (K.rows() != n || K.cols() != n)
    throw DimensionMismatchError("K dimension does not match bank");

  WeightQP qp;
  qp.gamma = gamma;
  qp.M.resize(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r));
  qp.a.resize(static_cast<Eigen::Index>(r));

  const double linear_coeff = paper_linear_term ? gamma / 2.0 : 2.0 * gamma;
  for (std::size_t i = 0; i < r; ++i) {
    const Eigen::MatrixXd& Hi = bank.kernels[i].values;
    qp.a[static_cast<Eigen::Index>(i)] = linear_coeff * trace_product_sym(K, Hi);
    for (std::size_t j = i; j < r; ++j) {
      const double mij = trace_product_sym(Hi, bank.kernels[j].values);
      qp.M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = mij;
      qp.M(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = mij;
    }
  }
  return qp;
}

double qp_objective(const WeightQP& qp, const Eigen::VectorXd& g) {
  return qp.gamma * g.dot(qp.M * g) - qp.a.dot(g);
}

SimplexQpResult solve_simplex_qp(const WeightQP& qp, const Eigen::VectorXd& g0,
                                 double tol, int max_iter) {
  const Eigen::Index r = qp.M.rows();
  if (qp.M.cols() != r || qp.a.size() != r || g0.size() != r)
    throw DimensionMismatchError("inconsistent QP dimensions");

  SimplexQpResult result;
  if (r == 1) {
    result.g = Eigen::VectorXd::Ones(1);
    result.converged = true;
    result.objective = qp_objective(qp, result.g);
    return result;
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(qp.M,
                                                     Eigen::EigenvaluesOnly);
  const double lip = std::max(2.0 * qp.gamma * eig.eigenvalues().maxCoeff(),
                              1e-12);
  const double step = 1.0 / lip;

  // Monotone variant of accelerated projected gradient: take the prox
  // candidate only when it improves, so the objective trace never rises.
  Eigen::VectorXd x = project_simplex(g0);
  Eigen::VectorXd x_prev = x;
  Eigen::VectorXd y = x;
  double fx = qp_objective(qp, x);
  double t = 1.0;

  const double scale = std::max(1.0, qp.a.cwiseAbs().maxCoeff());

  for (int k = 0; k < max_iter; ++k) {
    const Eigen::VectorXd grad_y = 2.0 * qp.gamma * (qp.M * y) - qp.a;
    const Eigen::VectorXd z = project_simplex(y - step * grad_y);
    const double fz = qp_objective(qp, z);

    x_prev = x;
    const double fx_prev = fx;
    if (fz <= fx_prev) {
      x = z;
      fx = fz;
    }

    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    y = x + (t / t_next) * (z - x) + ((t - 1.0) / t_next) * (x - x_prev);
    t = t_next;
    result.iterations = k + 1;
    result.objective_trace.push_back(fx);

    const Eigen::VectorXd grad_x = 2.0 * qp.gamma * (qp.M * x) - qp.a;
    if (kkt_residual(x, grad_x) <= tol * std::max(scale, grad_x.cwiseAbs().maxCoeff())) {
      result.converged = true;
      break;
    }
  }

  result.g = project_simplex(x);
  // The re-projection can smear sum rounding (~1e-16) onto coordinates that
  // were exactly zero; snap that dust back so the support is clean, and park
  // the mass on the largest coordinate.
  Eigen::Index imax = 0;
  result.g.maxCoeff(&imax);
  for (Eigen::Index i = 0; i < r; ++i)
    if (i != imax && result.g[i] < 1e-12) result.g[i] = 0.0;
  result.g[imax] += 1.0 - result.g.sum();
  result.objective = qp_objective(qp, result.g);
  return result;
}

}  // namespace kergraph
