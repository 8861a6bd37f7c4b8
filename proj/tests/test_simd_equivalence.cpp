// The vector kernels must agree with the scalar references: bitwise for the
// elementwise maps and max/min reductions, to rounding for the reassociating
// reductions. Sizes sweep across the unrolled width and the tail.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "kergraph/simd/simd_ops.hpp"

namespace simd = kergraph::simd;

namespace {

std::vector<double> random_vec(std::size_t n, std::mt19937_64& rng,
                               double lo = -3.0, double hi = 3.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = dist(rng);
  return v;
}

const std::vector<std::size_t> kSizes = {1,  2,  3,  4,  5,  7,  8,  9,
                                         15, 16, 17, 31, 33, 64, 67, 1024};

}  // namespace

TEST_CASE("dispatched dot matches scalar within rounding") {
  std::mt19937_64 rng(7);
  for (std::size_t n : kSizes) {
    const auto x = random_vec(n, rng);
    const auto y = random_vec(n, rng);
    const double ref = simd::scalar::dot(x.data(), y.data(), n);
    const double got = simd::dot(x.data(), y.data(), n);
    CHECK(got == doctest::Approx(ref).epsilon(1e-13));
  }
}

TEST_CASE("dispatched squared_distance matches scalar within rounding") {
  std::mt19937_64 rng(8);
  for (std::size_t n : kSizes) {
    const auto x = random_vec(n, rng);
    const auto y = random_vec(n, rng);
    const double ref = simd::scalar::squared_distance(x.data(), y.data(), n);
    const double got = simd::squared_distance(x.data(), y.data(), n);
    CHECK(got == doctest::Approx(ref).epsilon(1e-13));
    CHECK(got >= 0.0);
  }
}

TEST_CASE("max/min reductions are exact") {
  std::mt19937_64 rng(9);
  for (std::size_t n : kSizes) {
    const auto x = random_vec(n, rng);
    CHECK(simd::max_value(x.data(), n) == simd::scalar::max_value(x.data(), n));
    CHECK(simd::min_value(x.data(), n) == simd::scalar::min_value(x.data(), n));
  }
}

TEST_CASE("scale is bitwise identical to scalar") {
  std::mt19937_64 rng(10);
  for (std::size_t n : kSizes) {
    const auto x = random_vec(n, rng);
    std::vector<double> a(n), b(n);
    simd::scalar::scale(x.data(), n, 0.3183098861837907, a.data());
    simd::scale(x.data(), n, 0.3183098861837907, b.data());
    CHECK(a == b);
  }
}

TEST_CASE("divide is bitwise identical to scalar and exact at the max") {
  std::mt19937_64 rng(14);
  for (std::size_t n : kSizes) {
    const auto x = random_vec(n, rng, 0.1, 5.0);
    std::vector<double> a(n), b(n);
    const double denom = simd::max_value(x.data(), n);
    simd::scalar::divide(x.data(), n, denom, a.data());
    simd::divide(x.data(), n, denom, b.data());
    CHECK(a == b);
    CHECK(simd::max_value(b.data(), n) == 1.0);
  }
}

TEST_CASE("soft_threshold is bitwise identical to scalar") {
  std::mt19937_64 rng(11);
  for (std::size_t n : kSizes) {
    for (double tau : {0.0, 0.4, 2.9}) {
      const auto x = random_vec(n, rng);
      std::vector<double> a(n), b(n);
      simd::scalar::soft_threshold(x.data(), n, tau, a.data());
      simd::soft_threshold(x.data(), n, tau, b.data());
      CHECK(a == b);
    }
  }
}

TEST_CASE("soft_threshold in place (out aliases x)") {
  std::mt19937_64 rng(12);
  auto x = random_vec(37, rng);
  auto expect = x;
  simd::scalar::soft_threshold(expect.data(), expect.size(), 0.5,
                               expect.data());
  simd::soft_threshold(x.data(), x.size(), 0.5, x.data());
  CHECK(x == expect);
}

TEST_CASE("clip_nonneg matches scalar, including the clip count") {
  std::mt19937_64 rng(13);
  for (std::size_t n : kSizes) {
    auto a = random_vec(n, rng);
    auto b = a;
    const std::size_t ca = simd::scalar::clip_nonneg(a.data(), n);
    const std::size_t cb = simd::clip_nonneg(b.data(), n);
    CHECK(ca == cb);
    CHECK(a == b);
    for (double v : b) CHECK(v >= 0.0);
  }
}

TEST_CASE("dispatcher reports an implemented level") {
  const simd::IsaLevel level = simd::active_level();
  CHECK((level == simd::IsaLevel::scalar || level == simd::IsaLevel::avx2 ||
         level == simd::IsaLevel::neon));
  CHECK(simd::level_name(level) != nullptr);
  MESSAGE("active simd level: ", std::string(simd::level_name(level)));
}
