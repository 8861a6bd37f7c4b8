#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace kergraph {

/// Column-sample data matrix: m features x n samples, column i is sample i.
struct FeatureMatrix {
  Eigen::MatrixXd values;

  Eigen::Index n_features() const { return values.rows(); }
  Eigen::Index n_samples() const { return values.cols(); }
};

enum class KernelKind { gaussian, linear, polynomial };

struct KernelSpec {
  KernelKind kind = KernelKind::linear;
  double t = 1.0;  // gaussian width multiplier, > 0
  double a = 0.0;  // polynomial offset, 0 or 1
  int b = 2;       // polynomial degree, >= 1

  static KernelSpec gaussian(double t);
  static KernelSpec linear();
  static KernelSpec polynomial(double a, int b);

  std::string describe() const;
};

struct KernelMatrix {
  Eigen::MatrixXd values;  // symmetric n x n
  KernelSpec spec;
  bool normalized = false;
};

struct KernelBank {
  std::vector<KernelMatrix> kernels;
  // One entry per normalization that had to clip negative entries.
  std::vector<std::string> provenance_log;

  std::size_t size() const { return kernels.size(); }
  Eigen::Index n() const {
    return kernels.empty() ? 0 : kernels.front().values.rows();
  }
};

/// Largest pairwise Euclidean distance between samples. Shared by all
/// gaussian kernels of a bank; computed once per dataset.
double max_pairwise_distance(const FeatureMatrix& X);

/// Evaluate one kernel over all sample pairs. Gaussian needs d_max; pass the
/// precomputed value when building several kernels from the same data.
KernelMatrix build_kernel(const FeatureMatrix& X, const KernelSpec& spec);
KernelMatrix build_kernel(const FeatureMatrix& X, const KernelSpec& spec,
                          double d_max);

/// Scale so the largest entry is exactly 1. Negative entries remaining after
/// the scale are clipped to 0; the count is reported via clipped_out (or the
/// bank's provenance log when called through build_standard_bank).
KernelMatrix normalize_kernel(const KernelMatrix& H,
                              std::size_t* clipped_out = nullptr);

/// The 12-kernel recipe: seven gaussians t in {0.01, 0.05, 0.1, 1, 10, 50,
/// 100}, one linear, four polynomials (a, b) in {0,1} x {2,4}.
std::vector<KernelSpec> standard_bank_specs();
KernelBank build_standard_bank(const FeatureMatrix& X);

/// Bank from explicit specs (normalized, same construction path).
KernelBank build_bank(const FeatureMatrix& X,
                      const std::vector<KernelSpec>& specs);

/// FNV-1a over the raw bytes of X (shape included); tags cache files.
std::uint64_t dataset_hash(const FeatureMatrix& X);

}  // namespace kergraph
