#include "kergraph/consensus_solver.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <Eigen/SVD>
#include <cmath>
#include <random>

#include "kergraph/errors.hpp"
#include "kergraph/kernel_weights.hpp"
#include "kergraph/prox_ops.hpp"
#include "kergraph/simd/simd_ops.hpp"

namespace kergraph {

void SolverConfig::validate() const {
  if (!(alpha > 0.0) || !(beta > 0.0) || !(gamma > 0.0) || !(mu > 0.0))
    throw Error("solver config requires alpha, beta, gamma, mu > 0");
  if (!(tol > 0.0)) throw Error("solver config requires tol > 0");
  if (max_iter < 1) throw Error("solver config requires max_iter >= 1");
}

namespace {

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& M) {
  return 0.5 * (M + M.transpose()).eval();
}

void clip_inplace(Eigen::MatrixXd& M) {
  simd::clip_nonneg(M.data(), static_cast<std::size_t>(M.size()));
}

Eigen::MatrixXd combined_kernel(const KernelBank& bank,
                                const Eigen::VectorXd& g) {
  Eigen::MatrixXd out = g[0] * bank.kernels[0].values;
  for (std::size_t i = 1; i < bank.size(); ++i)
    out.noalias() += g[static_cast<Eigen::Index>(i)] * bank.kernels[i].values;
  return out;
}

double fro_norm(const Eigen::MatrixXd& M) {
  return std::sqrt(simd::dot(M.data(), M.data(),
                             static_cast<std::size_t>(M.size())));
}

}  // namespace

Eigen::MatrixXd update_Z(const Eigen::MatrixXd& K, const Eigen::MatrixXd& J,
                         const Eigen::MatrixXd& Y1, double mu) {
  if (!(mu > 0.0)) throw Error("update_Z requires mu > 0");
  const Eigen::Index n = K.rows();
  if (K.cols() != n || J.rows() != n || J.cols() != n || Y1.rows() != n ||
      Y1.cols() != n)
    throw DimensionMismatchError("update_Z dimension mismatch");
  if (!K.allFinite()) throw SingularSystemError("update_Z: K is not finite");

  Eigen::MatrixXd A = symmetrized(K);
  A.diagonal().array() += mu;
  const Eigen::MatrixXd rhs = K + mu * J + Y1;

  Eigen::MatrixXd Z = A.ldlt().solve(rhs);
  const double rhs_norm = fro_norm(rhs);
  double resid = (A * Z - rhs).norm();
  if (!(resid <= 1e-8 * (1.0 + rhs_norm)) || !Z.allFinite()) {
    // LDLT has no pivoting for the indefinite corner cases; retry with LU.
    Z = Eigen::PartialPivLU<Eigen::MatrixXd>(A).solve(rhs);
    resid = (A * Z - rhs).norm();
    if (!(resid <= 1e-8 * (1.0 + rhs_norm)) || !Z.allFinite())
      throw SingularSystemError("update_Z: (K + mu*I) solve failed");
  }
  return Z;
}

Eigen::MatrixXd update_K_combined(const Eigen::MatrixXd& Z,
                                  const Eigen::MatrixXd& W,
                                  const Eigen::MatrixXd& Y2,
                                  const Eigen::MatrixXd& combined, double mu,
                                  double gamma) {
  if (!(mu > 0.0) || !(gamma > 0.0))
    throw Error("update_K requires mu, gamma > 0");
  const Eigen::Index n = Z.rows();
  if (Z.cols() != n || W.rows() != n || W.cols() != n || Y2.rows() != n ||
      Y2.cols() != n || combined.rows() != n || combined.cols() != n)
    throw DimensionMismatchError("update_K dimension mismatch");

  Eigen::MatrixXd numerator = 2.0 * gamma * combined + mu * W + Y2;
  numerator.noalias() -= 0.5 * (Z * Z.transpose());
  numerator += Z.transpose();
  numerator.diagonal().array() -= 0.5;
  return numerator / (mu + 2.0 * gamma);
}

Eigen::MatrixXd update_K(const Eigen::MatrixXd& Z, const Eigen::MatrixXd& W,
                         const Eigen::MatrixXd& Y2, const Eigen::VectorXd& g,
                         const KernelBank& bank, double mu, double gamma) {
  if (bank.size() == 0 ||
      g.size() != static_cast<Eigen::Index>(bank.size()))
    throw DimensionMismatchError("update_K: weights do not match bank");
  return update_K_combined(Z, W, Y2, combined_kernel(bank, g), mu, gamma);
}

Eigen::MatrixXd update_J(const Eigen::MatrixXd& Z, const Eigen::MatrixXd& Y1,
                         double mu, double alpha, Regularizer regularizer) {
  if (!(mu > 0.0) || !(alpha > 0.0))
    throw Error("update_J requires mu, alpha > 0");
  const Eigen::MatrixXd D = Z - Y1 / mu;
  return regularizer == Regularizer::sparse ? soft_threshold(D, alpha / mu)
                                            : svt(D, alpha / mu);
}

Eigen::MatrixXd update_W(const Eigen::MatrixXd& K, const Eigen::MatrixXd& Y2,
                         double mu, double beta) {
  if (!(mu > 0.0) || !(beta > 0.0))
    throw Error("update_W requires mu, beta > 0");
  return svt(K - Y2 / mu, beta / mu);
}

void update_multipliers(SolverState& state, double mu) {
  state.Y1 += mu * (state.J - state.Z);
  state.Y2 += mu * (state.W - state.K);
}

double nuclear_norm(const Eigen::MatrixXd& A) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(A);
  if (svd.info() != Eigen::Success)
    throw SvdFailureError("nuclear norm SVD did not converge");
  return svd.singularValues().sum();
}

double lagrangian_value(const SolverState& state, const SolverConfig& config,
                        const KernelBank& bank) {
  const Eigen::MatrixXd& Z = state.Z;
  const Eigen::MatrixXd& K = state.K;

  // 1/2 Tr(K - 2KZ + Z'KZ); written entrywise so asymmetric K (e.g. from
  // finite-difference probes) is handled exactly.
  const double tr_K = K.trace();
  const double tr_KZ = K.cwiseProduct(Z.transpose()).sum();
  const Eigen::MatrixXd ZZt = Z * Z.transpose();
  const double tr_ZKZ = K.cwiseProduct(ZZt).sum();
  double value = 0.5 * (tr_K - 2.0 * tr_KZ + tr_ZKZ);

  value += config.alpha * (config.regularizer == Regularizer::sparse
                               ? state.J.cwiseAbs().sum()
                               : nuclear_norm(state.J));
  value += config.beta * nuclear_norm(state.W);

  const Eigen::MatrixXd diff = K - combined_kernel(bank, state.g);
  value += config.gamma * diff.squaredNorm();

  const double inv_mu = 1.0 / config.mu;
  value += 0.5 * config.mu *
           ((state.J - Z + inv_mu * state.Y1).squaredNorm() +
            (state.W - K + inv_mu * state.Y2).squaredNorm());
  return value;
}

SolverOutput solve(const KernelBank& bank, const SolverConfig& config,
                   const IterationObserver& observer) {
  config.validate();
  const std::size_t r = bank.size();
  if (r == 0) throw Error("solve requires a nonempty kernel bank");
  if (config.mode == SolverMode::fixed_kernel && r != 1)
    throw Error("fixed_kernel mode requires a bank of exactly one kernel");
  const Eigen::Index n = bank.n();

  SolverState state;
  state.g = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(r),
                                      1.0 / static_cast<double>(r));
  Eigen::MatrixXd combined = combined_kernel(bank, state.g);
  state.K = combined;
  state.W = combined;
  state.Y1 = Eigen::MatrixXd::Zero(n, n);
  state.Y2 = Eigen::MatrixXd::Zero(n, n);

  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  state.J.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) state.J(i, j) = unit(rng);
  state.Z = Eigen::MatrixXd::Zero(n, n);

  const bool multi = config.mode == SolverMode::multi_kernel;
  // Gram matrix of the bank is iteration-invariant; only the linear term of
  // the weight QP tracks K.
  WeightQP qp;
  if (multi)
    qp = build_qp_coefficients(bank, state.K, config.gamma,
                               config.paper_linear_term);
  const double linear_coeff =
      config.paper_linear_term ? config.gamma / 2.0 : 2.0 * config.gamma;

  SolverConfig live = config;  // mu may follow the adaptive schedule
  SolverOutput out;
  out.trace.reserve(static_cast<std::size_t>(config.max_iter));

  for (int iter = 1; iter <= config.max_iter; ++iter) {
    state.iter = iter;

    state.Z = update_Z(state.K, state.J, state.Y1, live.mu);
    clip_inplace(state.Z);

    if (multi) {
      state.K = update_K_combined(state.Z, state.W, state.Y2, combined,
                                  live.mu, live.gamma);
      state.K = symmetrized(state.K);
      clip_inplace(state.K);
    }

    state.J = update_J(state.Z, state.Y1, live.mu, live.alpha,
                       live.regularizer);
    clip_inplace(state.J);

    if (multi) {
      state.W = update_W(state.K, state.Y2, live.mu, live.beta);
      clip_inplace(state.W);

      for (std::size_t i = 0; i < r; ++i)
        qp.a[static_cast<Eigen::Index>(i)] =
            linear_coeff * state.K.cwiseProduct(bank.kernels[i].values).sum();
      const SimplexQpResult weights = solve_simplex_qp(qp, state.g);
      state.g = weights.g;
      combined = combined_kernel(bank, state.g);
    }

    update_multipliers(state, live.mu);

    TraceRow row;
    row.iter = iter;
    row.res_JZ = fro_norm(state.J - state.Z);
    row.res_WK = fro_norm(state.W - state.K);
    row.lagrangian = lagrangian_value(state, live, bank);
    row.g = state.g;
    out.trace.push_back(std::move(row));
    out.iterations = iter;

    if (!state.Z.allFinite() || !state.K.allFinite() ||
        !state.J.allFinite() || !state.W.allFinite() ||
        !state.Y1.allFinite() || !state.Y2.allFinite() ||
        !state.g.allFinite())
      throw NonFiniteError("solver iterate diverged (NaN/Inf)");

    if (observer) observer(state);

    const double rel_JZ =
        out.trace.back().res_JZ / std::max(1.0, fro_norm(state.Z));
    const double rel_WK =
        out.trace.back().res_WK / std::max(1.0, fro_norm(state.K));
    if (std::max(rel_JZ, rel_WK) <= config.tol) {
      out.converged = true;
      break;
    }

    if (config.adaptive_mu) live.mu = std::min(1.1 * live.mu, 1e6);
  }

  out.Z = state.Z;
  out.K = state.K;
  out.g = state.g;
  return out;
}

}  // namespace kergraph
