#pragma once

#include <cstddef>

// Per-ISA entry points wired up by the dispatcher. Only the TUs actually
// compiled for this target define their namespace.

namespace kergraph::simd {

#if defined(KERGRAPH_HAVE_AVX2_TU)
namespace avx2 {
double dot(const double* x, const double* y, std::size_t n);
double squared_distance(const double* x, const double* y, std::size_t n);
double max_value(const double* x, std::size_t n);
double min_value(const double* x, std::size_t n);
void scale(const double* x, std::size_t n, double c, double* out);
void divide(const double* x, std::size_t n, double denom, double* out);
void soft_threshold(const double* x, std::size_t n, double tau, double* out);
std::size_t clip_nonneg(double* x, std::size_t n);
}  // namespace avx2
#endif

#if defined(KERGRAPH_HAVE_NEON_TU)
namespace neon {
double dot(const double* x, const double* y, std::size_t n);
double squared_distance(const double* x, const double* y, std::size_t n);
double max_value(const double* x, std::size_t n);
double min_value(const double* x, std::size_t n);
void scale(const double* x, std::size_t n, double c, double* out);
void divide(const double* x, std::size_t n, double denom, double* out);
void soft_threshold(const double* x, std::size_t n, double tau, double* out);
std::size_t clip_nonneg(double* x, std::size_t n);
}  // namespace neon
#endif

}  // namespace kergraph::simd
