// NEON variants (aarch64, 2 lanes of f64). Mirrors the AVX2 TU.

#include <arm_neon.h>

#include <cstddef>

#include "kergraph/simd/simd_ops.hpp"

namespace kergraph::simd::neon {

double dot(const double* x, const double* y, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(x + i), vld1q_f64(y + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(x + i + 2), vld1q_f64(y + i + 2));
  }
  for (; i + 2 <= n; i += 2)
    acc0 = vfmaq_f64(acc0, vld1q_f64(x + i), vld1q_f64(y + i));
  double sum = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) sum += x[i] * y[i];
  return sum;
}

double squared_distance(const double* x, const double* y, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t d = vsubq_f64(vld1q_f64(x + i), vld1q_f64(y + i));
    acc = vfmaq_f64(acc, d, d);
  }
  double sum = vaddvq_f64(acc);
  for (; i < n; ++i) {
    const double d = x[i] - y[i];
    sum += d * d;
  }
  return sum;
}

double max_value(const double* x, std::size_t n) {
  std::size_t i = 0;
  double m;
  if (n >= 2) {
    float64x2_t acc = vld1q_f64(x);
    for (i = 2; i + 2 <= n; i += 2) acc = vmaxq_f64(acc, vld1q_f64(x + i));
    m = vmaxvq_f64(acc);
  } else {
    m = x[0];
    i = 1;
  }
  for (; i < n; ++i)
    if (x[i] > m) m = x[i];
  return m;
}

double min_value(const double* x, std::size_t n) {
  std::size_t i = 0;
  double m;
  if (n >= 2) {
    float64x2_t acc = vld1q_f64(x);
    for (i = 2; i + 2 <= n; i += 2) acc = vminq_f64(acc, vld1q_f64(x + i));
    m = vminvq_f64(acc);
  } else {
    m = x[0];
    i = 1;
  }
  for (; i < n; ++i)
    if (x[i] < m) m = x[i];
  return m;
}

void scale(const double* x, std::size_t n, double c, double* out) {
  const float64x2_t vc = vdupq_n_f64(c);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    vst1q_f64(out + i, vmulq_f64(vld1q_f64(x + i), vc));
  for (; i < n; ++i) out[i] = x[i] * c;
}

void divide(const double* x, std::size_t n, double denom, double* out) {
  const float64x2_t vd = vdupq_n_f64(denom);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    vst1q_f64(out + i, vdivq_f64(vld1q_f64(x + i), vd));
  for (; i < n; ++i) out[i] = x[i] / denom;
}

void soft_threshold(const double* x, std::size_t n, double tau, double* out) {
  const float64x2_t vtau = vdupq_n_f64(tau);
  const float64x2_t zero = vdupq_n_f64(0.0);
  const uint64x2_t sign_mask = vdupq_n_u64(0x8000000000000000ull);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t v = vld1q_f64(x + i);
    float64x2_t shrunk = vsubq_f64(vabsq_f64(v), vtau);
    uint64x2_t alive = vcgtq_f64(shrunk, zero);
    uint64x2_t sign_bits = vandq_u64(vreinterpretq_u64_f64(v), sign_mask);
    uint64x2_t signed_val = vorrq_u64(vreinterpretq_u64_f64(shrunk), sign_bits);
    vst1q_f64(out + i, vreinterpretq_f64_u64(vandq_u64(alive, signed_val)));
  }
  for (; i < n; ++i) {
    const double shrunk = (x[i] < 0.0 ? -x[i] : x[i]) - tau;
    out[i] = shrunk > 0.0 ? (x[i] < 0.0 ? -shrunk : shrunk) : 0.0;
  }
}

std::size_t clip_nonneg(double* x, std::size_t n) {
  const float64x2_t zero = vdupq_n_f64(0.0);
  std::size_t clipped = 0;
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t v = vld1q_f64(x + i);
    uint64x2_t neg = vcltq_f64(v, zero);
    clipped += (vgetq_lane_u64(neg, 0) >> 63) + (vgetq_lane_u64(neg, 1) >> 63);
    vst1q_f64(x + i, vreinterpretq_f64_u64(
                         vbicq_u64(vreinterpretq_u64_f64(v), neg)));
  }
  for (; i < n; ++i) {
    if (x[i] < 0.0) {
      x[i] = 0.0;
      ++clipped;
    }
  }
  return clipped;
}

}  // namespace kergraph::simd::neon
