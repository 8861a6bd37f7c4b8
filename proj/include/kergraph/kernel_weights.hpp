#pragma once

#include <Eigen/Dense>
#include <vector>

#include "kergraph/kernel_bank.hpp"

namespace kergraph {

/// Quadratic program for the kernel weights: minimize gamma * g'Mg - a'g
/// over the probability simplex.
struct WeightQP {
  Eigen::MatrixXd M;  // r x r, M_ij = Tr(H^i H^j)
  Eigen::VectorXd a;  // a_i = linear_coeff * Tr(K H^i)
  double gamma = 1.0;
};

struct SimplexQpResult {
  Eigen::VectorXd g;
  bool converged = false;
  int iterations = 0;
  double objective = 0.0;
  std::vector<double> objective_trace;  // one value per iteration
};

/// Expanding gamma*||K - sum g_i H^i||_F^2 gives a_i = 2*gamma*Tr(K H^i);
/// paper_linear_term switches to the gamma/2 constant printed in the source
/// derivation (it only rescales a).
WeightQP build_qp_coefficients(const KernelBank& bank,
                               const Eigen::MatrixXd& K, double gamma,
                               bool paper_linear_term = false);

double qp_objective(const WeightQP& qp, const Eigen::VectorXd& g);

/// Projected gradient with Nesterov acceleration, fixed step 1/L with
/// L = 2*gamma*||M||_2; g0 is the warm start.
SimplexQpResult solve_simplex_qp(const WeightQP& qp,
                                 const Eigen::VectorXd& g0,
                                 double tol = 1e-10, int max_iter = 10000);

}  // namespace kergraph
