// AVX2+FMA variants. This TU is the only one built with -mavx2 -mfma; the
// dispatcher never routes here unless cpuid reports both features.

#include <immintrin.h>

#include <cstddef>
#include <cstdint>

#include "kergraph/simd/simd_ops.hpp"

namespace kergraph::simd::avx2 {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

inline double hmax(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_max_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_max_sd(lo, sh));
}

inline double hmin(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_min_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_min_sd(lo, sh));
}

}  // namespace

double dot(const double* x, const double* y, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
  double sum = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) sum += x[i] * y[i];
  return sum;
}

double squared_distance(const double* x, const double* y, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4));
    acc0 = _mm256_fmadd_pd(d0, d0, acc0);
    acc1 = _mm256_fmadd_pd(d1, d1, acc1);
  }
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    acc0 = _mm256_fmadd_pd(d, d, acc0);
  }
  double sum = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) {
    const double d = x[i] - y[i];
    sum += d * d;
  }
  return sum;
}

double max_value(const double* x, std::size_t n) {
  std::size_t i = 0;
  double m;
  if (n >= 4) {
    __m256d acc = _mm256_loadu_pd(x);
    for (i = 4; i + 4 <= n; i += 4)
      acc = _mm256_max_pd(acc, _mm256_loadu_pd(x + i));
    m = hmax(acc);
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
  if (n >= 4) {
    __m256d acc = _mm256_loadu_pd(x);
    for (i = 4; i + 4 <= n; i += 4)
      acc = _mm256_min_pd(acc, _mm256_loadu_pd(x + i));
    m = hmin(acc);
  } else {
    m = x[0];
    i = 1;
  }
  for (; i < n; ++i)
    if (x[i] < m) m = x[i];
  return m;
}

void scale(const double* x, std::size_t n, double c, double* out) {
  const __m256d vc = _mm256_set1_pd(c);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), vc));
  for (; i < n; ++i) out[i] = x[i] * c;
}

void divide(const double* x, std::size_t n, double denom, double* out) {
  const __m256d vd = _mm256_set1_pd(denom);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_div_pd(_mm256_loadu_pd(x + i), vd));
  for (; i < n; ++i) out[i] = x[i] / denom;
}

void soft_threshold(const double* x, std::size_t n, double tau, double* out) {
  const __m256d vtau = _mm256_set1_pd(tau);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_loadu_pd(x + i);
    __m256d mag = _mm256_andnot_pd(sign_mask, v);
    __m256d shrunk = _mm256_sub_pd(mag, vtau);
    __m256d alive = _mm256_cmp_pd(shrunk, zero, _CMP_GT_OQ);
    __m256d signed_val = _mm256_or_pd(shrunk, _mm256_and_pd(sign_mask, v));
    _mm256_storeu_pd(out + i, _mm256_and_pd(alive, signed_val));
  }
  for (; i < n; ++i) {
    const double shrunk = (x[i] < 0.0 ? -x[i] : x[i]) - tau;
    out[i] = shrunk > 0.0 ? (x[i] < 0.0 ? -shrunk : shrunk) : 0.0;
  }
}

std::size_t clip_nonneg(double* x, std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  std::size_t clipped = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_loadu_pd(x + i);
    __m256d neg = _mm256_cmp_pd(v, zero, _CMP_LT_OQ);
    clipped += static_cast<std::size_t>(_mm_popcnt_u32(
        static_cast<unsigned>(_mm256_movemask_pd(neg))));
    _mm256_storeu_pd(x + i, _mm256_andnot_pd(neg, v));
  }
  for (; i < n; ++i) {
    if (x[i] < 0.0) {
      x[i] = 0.0;
      ++clipped;
    }
  }
  return clipped;
}

}  // namespace kergraph::simd::avx2
