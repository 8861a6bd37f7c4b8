#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "kergraph/errors.hpp"
#include "kergraph/kernel_weights.hpp"

using namespace kergraph;

namespace {

KernelMatrix wrap(const Eigen::MatrixXd& values) {
  KernelMatrix k;
  k.values = values;
  k.spec = KernelSpec::linear();
  k.normalized = true;
  return k;
}

KernelBank random_bank(std::size_t r, Eigen::Index n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  KernelBank bank;
  for (std::size_t i = 0; i < r; ++i) {
    Eigen::MatrixXd B(n, n);
    for (Eigen::Index c = 0; c < n; ++c)
      for (Eigen::Index r2 = 0; r2 < n; ++r2) B(r2, c) = unit(rng);
    Eigen::MatrixXd H = B * B.transpose();
    H /= H.maxCoeff();
    bank.kernels.push_back(wrap(H));
  }
  return bank;
}

Eigen::VectorXd uniform_start(Eigen::Index r) {
  return Eigen::VectorXd::Constant(r, 1.0 / static_cast<double>(r));
}

}  // namespace

TEST_CASE("qp coefficients for a single kernel") {
  std::mt19937_64 rng(1);
  KernelBank bank = random_bank(1, 4, rng);
  const Eigen::MatrixXd& H = bank.kernels[0].values;
  const double gamma = 2.5;
  const WeightQP qp = build_qp_coefficients(bank, H, gamma);
  const double tr_h2 = (H * H).trace();
  CHECK(qp.M(0, 0) == doctest::Approx(tr_h2).epsilon(1e-12));
  CHECK(qp.a[0] == doctest::Approx(2.0 * gamma * tr_h2).epsilon(1e-12));
}

TEST_CASE("paper linear-term switch rescales a") {
  std::mt19937_64 rng(2);
  KernelBank bank = random_bank(2, 4, rng);
  const Eigen::MatrixXd K = bank.kernels[0].values;
  const WeightQP expansion = build_qp_coefficients(bank, K, 3.0, false);
  const WeightQP paper = build_qp_coefficients(bank, K, 3.0, true);
  // 2*gamma vs gamma/2: factor 4
  CHECK((expansion.a - 4.0 * paper.a).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(expansion.M == paper.M);
}

TEST_CASE("orthogonal kernels give a diagonal Gram") {
  KernelBank bank;
  Eigen::MatrixXd H1 = Eigen::MatrixXd::Zero(2, 2);
  H1(0, 0) = 1.0;
  Eigen::MatrixXd H2 = Eigen::MatrixXd::Zero(2, 2);
  H2(1, 1) = 1.0;
  bank.kernels.push_back(wrap(H1));
  bank.kernels.push_back(wrap(H2));
  const WeightQP qp =
      build_qp_coefficients(bank, Eigen::MatrixXd::Identity(2, 2), 1.0);
  CHECK(qp.M(0, 1) == 0.0);
  CHECK(qp.M(1, 0) == 0.0);
  CHECK(qp.M(0, 0) == 1.0);
  CHECK(qp.M(1, 1) == 1.0);
}

TEST_CASE("coefficients match the naive double-loop trace oracle") {
  std::mt19937_64 rng(3);
  KernelBank bank = random_bank(3, 5, rng);
  Eigen::MatrixXd K = bank.kernels[1].values * 0.7;
  const double gamma = 4.0;
  const WeightQP qp = build_qp_coefficients(bank, K, gamma);

  for (int i = 0; i < 3; ++i) {
    double a_i = 0.0;
    for (Eigen::Index p = 0; p < 5; ++p)
      for (Eigen::Index q = 0; q < 5; ++q)
        a_i += K(p, q) *
               bank.kernels[static_cast<std::size_t>(i)].values(q, p);
    CHECK(qp.a[i] == doctest::Approx(2.0 * gamma * a_i).epsilon(1e-10));
    for (int j = 0; j < 3; ++j) {
      double m_ij = 0.0;
      for (Eigen::Index p = 0; p < 5; ++p)
        for (Eigen::Index q = 0; q < 5; ++q)
          m_ij += bank.kernels[static_cast<std::size_t>(i)].values(p, q) *
                  bank.kernels[static_cast<std::size_t>(j)].values(q, p);
      CHECK(qp.M(i, j) == doctest::Approx(m_ij).epsilon(1e-10));
    }
  }
}

TEST_CASE("r = 1 is constraint-forced") {
  WeightQP qp;
  qp.M = Eigen::MatrixXd::Constant(1, 1, 2.0);
  qp.a = Eigen::VectorXd::Constant(1, -3.0);
  qp.gamma = 1.0;
  const SimplexQpResult result = solve_simplex_qp(qp, uniform_start(1));
  CHECK(result.g[0] == 1.0);
  CHECK(result.converged);
}

TEST_CASE("identity Gram with zero linear term gives uniform weights") {
  WeightQP qp;
  qp.M = Eigen::MatrixXd::Identity(5, 5);
  qp.a = Eigen::VectorXd::Zero(5);
  qp.gamma = 1.0;
  Eigen::VectorXd start(5);
  start << 0.9, 0.05, 0.03, 0.01, 0.01;
  const SimplexQpResult result = solve_simplex_qp(qp, start);
  for (Eigen::Index i = 0; i < 5; ++i)
    CHECK(result.g[i] == doctest::Approx(0.2).epsilon(1e-8));
}

TEST_CASE("r = 2 objective matches the 1e-4-step grid oracle") {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::MatrixXd B(2, 2);
    B << gauss(rng), gauss(rng), gauss(rng), gauss(rng);
    WeightQP qp;
    qp.M = B * B.transpose();
    qp.a = Eigen::VectorXd(2);
    qp.a << gauss(rng), gauss(rng);
    qp.gamma = 1.3;

    const SimplexQpResult result = solve_simplex_qp(qp, uniform_start(2));

    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 10000; ++i) {
      Eigen::VectorXd g(2);
      g << i / 10000.0, 1.0 - i / 10000.0;
      best = std::min(best, qp_objective(qp, g));
    }
    CHECK(result.objective <= best + 1e-6);
  }
}

TEST_CASE("KKT certificate at the solution") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::MatrixXd B(4, 4);
    for (Eigen::Index j = 0; j < 4; ++j)
      for (Eigen::Index i = 0; i < 4; ++i) B(i, j) = gauss(rng);
    WeightQP qp;
    qp.M = B * B.transpose();
    qp.a = Eigen::VectorXd(4);
    for (Eigen::Index i = 0; i < 4; ++i) qp.a[i] = gauss(rng);
    qp.gamma = 0.8;

    const SimplexQpResult result = solve_simplex_qp(qp, uniform_start(4));
    REQUIRE(result.converged);

    const Eigen::VectorXd grad = 2.0 * qp.gamma * (qp.M * result.g) - qp.a;
    double lambda = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < 4; ++i)
      if (result.g[i] > 0.0) lambda = std::min(lambda, grad[i]);
    for (Eigen::Index i = 0; i < 4; ++i) {
      if (result.g[i] > 0.0)
        CHECK(std::abs(grad[i] - lambda) <= 1e-6);
      else
        CHECK(grad[i] >= lambda - 1e-6);
    }
  }
}

TEST_CASE("feasibility is exact and the objective trace is monotone") {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> gauss(0.0, 2.0);
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::MatrixXd B(6, 6);
    for (Eigen::Index j = 0; j < 6; ++j)
      for (Eigen::Index i = 0; i < 6; ++i) B(i, j) = gauss(rng);
    WeightQP qp;
    qp.M = B * B.transpose();
    qp.a = Eigen::VectorXd(6);
    for (Eigen::Index i = 0; i < 6; ++i) qp.a[i] = gauss(rng);
    qp.gamma = 2.0;

    const SimplexQpResult result = solve_simplex_qp(qp, uniform_start(6));
    CHECK(std::abs(result.g.sum() - 1.0) <= 1e-12);
    CHECK(result.g.minCoeff() >= 0.0);
    for (std::size_t i = 1; i < result.objective_trace.size(); ++i)
      CHECK(result.objective_trace[i] <= result.objective_trace[i - 1]);
  }
}

TEST_CASE("joint scaling of M and a leaves the argmin unchanged") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd B(3, 3);
  for (Eigen::Index j = 0; j < 3; ++j)
    for (Eigen::Index i = 0; i < 3; ++i) B(i, j) = gauss(rng);
  WeightQP qp;
  qp.M = B * B.transpose();
  qp.a = Eigen::VectorXd(3);
  qp.a << 0.4, -0.2, 1.1;
  qp.gamma = 1.0;

  WeightQP scaled = qp;
  scaled.M *= 17.0;
  scaled.a *= 17.0;

  const Eigen::VectorXd g1 = solve_simplex_qp(qp, uniform_start(3)).g;
  const Eigen::VectorXd g2 = solve_simplex_qp(scaled, uniform_start(3)).g;
  CHECK((g1 - g2).cwiseAbs().maxCoeff() <= 1e-7);
}

TEST_CASE("dimension mismatches are rejected") {
  std::mt19937_64 rng(8);
  KernelBank bank = random_bank(2, 4, rng);
  CHECK_THROWS_AS(
      build_qp_coefficients(bank, Eigen::MatrixXd::Identity(3, 3), 1.0),
      DimensionMismatchError);

  WeightQP qp;
  qp.M = Eigen::MatrixXd::Identity(3, 3);
  qp.a = Eigen::VectorXd::Zero(2);
  CHECK_THROWS_AS(solve_simplex_qp(qp, uniform_start(3)),
                  DimensionMismatchError);
}
