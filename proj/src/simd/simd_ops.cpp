#include "kergraph/simd/simd_ops.hpp"

#include <cstdlib>
#include <cstring>

#include "simd_ops_impl.hpp"

#if defined(KERGRAPH_HAVE_AVX2_TU)
#include <cpuid.h>
#endif

namespace kergraph::simd {

namespace {

struct OpsTable {
  double (*dot)(const double*, const double*, std::size_t);
  double (*squared_distance)(const double*, const double*, std::size_t);
  double (*max_value)(const double*, std::size_t);
  double (*min_value)(const double*, std::size_t);
  void (*scale)(const double*, std::size_t, double, double*);
  void (*divide)(const double*, std::size_t, double, double*);
  void (*soft_threshold)(const double*, std::size_t, double, double*);
  std::size_t (*clip_nonneg)(double*, std::size_t);
  IsaLevel level;
};

constexpr OpsTable kScalarTable{
    scalar::dot,       scalar::squared_distance, scalar::max_value,
    scalar::min_value, scalar::scale,            scalar::divide,
    scalar::soft_threshold, scalar::clip_nonneg, IsaLevel::scalar};

#if defined(KERGRAPH_HAVE_AVX2_TU)
constexpr OpsTable kAvx2Table{
    avx2::dot,       avx2::squared_distance, avx2::max_value,
    avx2::min_value, avx2::scale,            avx2::divide,
    avx2::soft_threshold, avx2::clip_nonneg, IsaLevel::avx2};

bool cpu_has_avx2_fma() {
  unsigned eax = 0, ebx = 0, ecx = 0, edx = 0;
  if (!__get_cpuid(1, &eax, &ebx, &ecx, &edx)) return false;
  const bool fma = ecx & bit_FMA;
  const bool osxsave = ecx & bit_OSXSAVE;
  if (!fma || !osxsave) return false;
  // OS must save ymm state; xgetbv via asm so this TU needs no -mxsave.
  unsigned xcr0_lo = 0, xcr0_hi = 0;
  __asm__ volatile("xgetbv" : "=a"(xcr0_lo), "=d"(xcr0_hi) : "c"(0));
  if ((xcr0_lo & 0x6) != 0x6) return false;
  if (!__get_cpuid_count(7, 0, &eax, &ebx, &ecx, &edx)) return false;
  return ebx & bit_AVX2;
}
#endif

#if defined(KERGRAPH_HAVE_NEON_TU)
constexpr OpsTable kNeonTable{
    neon::dot,       neon::squared_distance, neon::max_value,
    neon::min_value, neon::scale,            neon::divide,
    neon::soft_threshold, neon::clip_nonneg, IsaLevel::neon};
#endif

const OpsTable& resolve() {
  const char* force = std::getenv("KERGRAPH_SIMD");
  if (force && std::strcmp(force, "scalar") == 0) return kScalarTable;
#if defined(KERGRAPH_HAVE_AVX2_TU)
  if (force && std::strcmp(force, "avx2") == 0) return kAvx2Table;
  if (!force || std::strcmp(force, "auto") == 0)
    if (cpu_has_avx2_fma()) return kAvx2Table;
#endif
#if defined(KERGRAPH_HAVE_NEON_TU)
  if (force && std::strcmp(force, "neon") == 0) return kNeonTable;
  if (!force || std::strcmp(force, "auto") == 0) return kNeonTable;
#endif
  return kScalarTable;
}

const OpsTable& active() {
  static const OpsTable& table = resolve();
  return table;
}

}  // namespace

IsaLevel active_level() { return active().level; }

const char* level_name(IsaLevel level) {
  switch (level) {
    case IsaLevel::avx2: return "avx2";
    case IsaLevel::neon: return "neon";
    default: return "scalar";
  }
}

double dot(const double* x, const double* y, std::size_t n) {
  return active().dot(x, y, n);
}

double squared_distance(const double* x, const double* y, std::size_t n) {
  return active().squared_distance(x, y, n);
}

double max_value(const double* x, std::size_t n) {
  return active().max_value(x, n);
}

double min_value(const double* x, std::size_t n) {
  return active().min_value(x, n);
}

void scale(const double* x, std::size_t n, double c, double* out) {
  active().scale(x, n, c, out);
}

void divide(const double* x, std::size_t n, double denom, double* out) {
  active().divide(x, n, denom, out);
}

void soft_threshold(const double* x, std::size_t n, double tau, double* out) {
  active().soft_threshold(x, n, tau, out);
}

std::size_t clip_nonneg(double* x, std::size_t n) {
  return active().clip_nonneg(x, n);
}

}  // namespace kergraph::simd
