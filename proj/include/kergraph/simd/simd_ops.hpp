#pragma once

#include <cstddef>

// Data-parallel primitives backing the hot loops: pairwise distances and
// Frobenius products during kernel construction, elementwise shrinkage and
// clipping inside the solver. Each op has a scalar reference kernel and,
// where the target supports it, a vectorized variant selected once at
// runtime. KERGRAPH_SIMD=scalar|avx2|neon|auto overrides the selection.

namespace kergraph::simd {

enum class IsaLevel { scalar, avx2, neon };

// Level the dispatcher resolved to (cpuid + env override, cached).
IsaLevel active_level();
const char* level_name(IsaLevel level);

// Reductions. dot and squared_distance may reassociate, so the vector
// variants agree with the scalar reference only up to rounding;
// max_value/min_value are exact.
double dot(const double* x, const double* y, std::size_t n);
double squared_distance(const double* x, const double* y, std::size_t n);
double max_value(const double* x, std::size_t n);  // n >= 1
double min_value(const double* x, std::size_t n);  // n >= 1

// Elementwise maps; out may alias x. Bitwise identical across levels.
// divide is a true division (x[i]/denom == 1 exactly when x[i] == denom),
// which scale-by-reciprocal would not give.
void scale(const double* x, std::size_t n, double c, double* out);
void divide(const double* x, std::size_t n, double denom, double* out);
void soft_threshold(const double* x, std::size_t n, double tau, double* out);

// In-place max(x, 0); returns how many entries were negative.
std::size_t clip_nonneg(double* x, std::size_t n);

// Reference kernels, always available; the equivalence tests and the
// dispatcher's fallback both go through these.
namespace scalar {
double dot(const double* x, const double* y, std::size_t n);
double squared_distance(const double* x, const double* y, std::size_t n);
double max_value(const double* x, std::size_t n);
double min_value(const double* x, std::size_t n);
void scale(const double* x, std::size_t n, double c, double* out);
void divide(const double* x, std::size_t n, double denom, double* out);
void soft_threshold(const double* x, std::size_t n, double tau, double* out);
std::size_t clip_nonneg(double* x, std::size_t n);
}  // namespace scalar

}  // namespace kergraph::simd
