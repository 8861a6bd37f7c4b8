#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

#include "kergraph/kernel_bank.hpp"

namespace kergraph {

enum class Regularizer { sparse, lowrank };
enum class SolverMode { multi_kernel, fixed_kernel };

struct SolverConfig {
  double alpha = 1e-2;  // graph regularization weight
  double beta = 1e-1;   // nuclear-norm weight on the consensus kernel
  double gamma = 10.0;  // kernel-neighborhood weight
  double mu = 1.0;      // ADMM penalty
  Regularizer regularizer = Regularizer::lowrank;
  SolverMode mode = SolverMode::multi_kernel;
  double tol = 1e-5;  // relative primal residual tolerance
  int max_iter = 300;
  std::uint64_t seed = 0;
  // mu <- min(1.1*mu, 1e6) each iteration. The fixed-mu loop oscillates and
  // can diverge on easy instances (the duals drift while -ZZ'/2 feeds back
  // into K), so the schedule is the default; set false for the fixed-mu
  // variant.
  bool adaptive_mu = true;
  // gamma/2 linear constant in the weight QP instead of the
  // expansion-consistent 2*gamma.
  bool paper_linear_term = false;

  void validate() const;  // throws on invalid values
};

struct SolverState {
  Eigen::MatrixXd Z;   // graph coefficients
  Eigen::MatrixXd K;   // consensus kernel
  Eigen::MatrixXd J;   // auxiliary for Z
  Eigen::MatrixXd W;   // auxiliary for K
  Eigen::VectorXd g;   // kernel weights on the simplex
  Eigen::MatrixXd Y1;  // dual for J = Z
  Eigen::MatrixXd Y2;  // dual for W = K
  int iter = 0;
};

struct TraceRow {
  int iter = 0;
  double res_JZ = 0.0;  // ||J - Z||_F
  double res_WK = 0.0;  // ||W - K||_F
  double lagrangian = 0.0;
  Eigen::VectorXd g;
};

struct SolverOutput {
  Eigen::MatrixXd Z;
  Eigen::MatrixXd K;
  Eigen::VectorXd g;
  std::vector<TraceRow> trace;
  bool converged = false;
  int iterations = 0;
};

/// Z = (K + mu*I)^{-1} (K + mu*J + Y1); K is symmetrized before the
/// factorization. Returned pre-clipping.
Eigen::MatrixXd update_Z(const Eigen::MatrixXd& K, const Eigen::MatrixXd& J,
                         const Eigen::MatrixXd& Y1, double mu);

/// K = (2*gamma*sum_i g_i H^i + mu*W + Y2 - I/2 + Z' - ZZ'/2) / (mu+2*gamma),
/// pre-clipping, pre-symmetrization.
Eigen::MatrixXd update_K(const Eigen::MatrixXd& Z, const Eigen::MatrixXd& W,
                         const Eigen::MatrixXd& Y2, const Eigen::VectorXd& g,
                         const KernelBank& bank, double mu, double gamma);
Eigen::MatrixXd update_K_combined(const Eigen::MatrixXd& Z,
                                  const Eigen::MatrixXd& W,
                                  const Eigen::MatrixXd& Y2,
                                  const Eigen::MatrixXd& combined, double mu,
                                  double gamma);

/// Prox step on D = Z - Y1/mu with threshold alpha/mu (soft threshold or
/// singular value threshold, depending on the regularizer).
Eigen::MatrixXd update_J(const Eigen::MatrixXd& Z, const Eigen::MatrixXd& Y1,
                         double mu, double alpha, Regularizer regularizer);

/// Nuclear-norm prox at G = K - Y2/mu with threshold beta/mu.
Eigen::MatrixXd update_W(const Eigen::MatrixXd& K, const Eigen::MatrixXd& Y2,
                         double mu, double beta);

/// Y1 += mu*(J - Z); Y2 += mu*(W - K).
void update_multipliers(SolverState& state, double mu);

/// Augmented Lagrangian value at the given state (with the configured
/// regularizer on J). Valid for arbitrary, not necessarily symmetric, K.
double lagrangian_value(const SolverState& state, const SolverConfig& config,
                        const KernelBank& bank);

/// Sum of singular values.
double nuclear_norm(const Eigen::MatrixXd& A);

/// Invoked after every full iteration; used by test harnesses to audit
/// per-iteration invariants.
using IterationObserver = std::function<void(const SolverState&)>;

SolverOutput solve(const KernelBank& bank, const SolverConfig& config,
                   const IterationObserver& observer = {});

}  // namespace kergraph
