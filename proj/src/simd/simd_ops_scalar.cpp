#include "kergraph/simd/simd_ops.hpp"

#include <cmath>

namespace kergraph::simd::scalar {

double dot(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

double squared_distance(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = x[i] - y[i];
    acc += d * d;
  }
  return acc;
}

double max_value(const double* x, std::size_t n) {
  double m = x[0];
  for (std::size_t i = 1; i < n; ++i)
    if (x[i] > m) m = x[i];
  return m;
}

double min_value(const double* x, std::size_t n) {
  double m = x[0];
  for (std::size_t i = 1; i < n; ++i)
    if (x[i] < m) m = x[i];
  return m;
}

void scale(const double* x, std::size_t n, double c, double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] * c;
}

void divide(const double* x, std::size_t n, double denom, double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] / denom;
}

void soft_threshold(const double* x, std::size_t n, double tau, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    const double shrunk = std::fabs(x[i]) - tau;
    out[i] = shrunk > 0.0 ? std::copysign(shrunk, x[i]) : 0.0;
  }
}

std::size_t clip_nonneg(double* x, std::size_t n) {
  std::size_t clipped = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i] < 0.0) {
      x[i] = 0.0;
      ++clipped;
    }
  }
  return clipped;
}

}  // namespace kergraph::simd::scalar
