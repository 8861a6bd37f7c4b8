#include "kergraph/kernel_bank.hpp"

#include <cmath>
#include <cstring>
#include <sstream>

#include "kergraph/errors.hpp"
#include "kergraph/simd/simd_ops.hpp"

namespace kergraph {

KernelSpec KernelSpec::gaussian(double t) {
  KernelSpec s;
  s.kind = KernelKind::gaussian;
  s.t = t;
  return s;
}

KernelSpec KernelSpec::linear() {
  KernelSpec s;
  s.kind = KernelKind::linear;
  return s;
}

KernelSpec KernelSpec::polynomial(double a, int b) {
  KernelSpec s;
  s.kind = KernelKind::polynomial;
  s.a = a;
  s.b = b;
  return s;
}

std::string KernelSpec::describe() const {
  std::ostringstream os;
  switch (kind) {
    case KernelKind::gaussian: os << "gaussian(t=" << t << ")"; break;
    case KernelKind::linear: os << "linear"; break;
    case KernelKind::polynomial:
      os << "polynomial(a=" << a << ",b=" << b << ")";
      break;
  }
  return os.str();
}

namespace {

void validate_features(const FeatureMatrix& X) {
  if (X.n_samples() < 2 || X.n_features() < 1)
    throw DimensionMismatchError("feature matrix must be m>=1 x n>=2");
  if (!X.values.allFinite())
    throw NonFiniteError("feature matrix contains non-finite entries");
}

void validate_spec(const KernelSpec& spec) {
  switch (spec.kind) {
    case KernelKind::gaussian:
      if (!(spec.t > 0.0))
        throw Error("gaussian kernel requires t > 0");
      break;
    case KernelKind::polynomial:
      if (spec.b < 1)
        throw Error("polynomial kernel requires b >= 1");
      if (spec.a != 0.0 && spec.a != 1.0)
        throw Error("polynomial kernel offset a must be 0 or 1");
      break;
    case KernelKind::linear:
      break;
  }
}

// Gram matrix of squared pairwise distances, exact symmetry by construction.
Eigen::MatrixXd pairwise_sq_dists(const FeatureMatrix& X) {
  const Eigen::Index n = X.n_samples();
  const Eigen::Index m = X.n_features();
  Eigen::MatrixXd D2(n, n);
  const double* data = X.values.data();
  for (Eigen::Index j = 0; j < n; ++j) {
    D2(j, j) = 0.0;
    const double* xj = data + j * m;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const double d2 = simd::squared_distance(data + i * m, xj,
                                               static_cast<std::size_t>(m));
      D2(i, j) = d2;
      D2(j, i) = d2;
    }
  }
  return D2;
}

}  // namespace

double max_pairwise_distance(const FeatureMatrix& X) {
  validate_features(X);
  const Eigen::Index n = X.n_samples();
  const Eigen::Index m = X.n_features();
  const double* data = X.values.data();
  double max_d2 = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double* xj = data + j * m;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const double d2 = simd::squared_distance(data + i * m, xj,
                                               static_cast<std::size_t>(m));
      if (d2 > max_d2) max_d2 = d2;
    }
  }
  return std::sqrt(max_d2);
}

KernelMatrix build_kernel(const FeatureMatrix& X, const KernelSpec& spec) {
  const double d_max = spec.kind == KernelKind::gaussian
                           ? max_pairwise_distance(X)
                           : 0.0;
  return build_kernel(X, spec, d_max);
}

KernelMatrix build_kernel(const FeatureMatrix& X, const KernelSpec& spec,
                          double d_max) {
  validate_features(X);
  validate_spec(spec);

  KernelMatrix H;
  H.spec = spec;
  H.normalized = false;

  switch (spec.kind) {
    case KernelKind::gaussian: {
      if (!(d_max > 0.0))
        throw DegenerateDataError(
            "gaussian kernel undefined: all samples identical (d_max = 0)");
      const Eigen::MatrixXd D2 = pairwise_sq_dists(X);
      const double inv = 1.0 / (spec.t * d_max * d_max);
      H.values = (-inv * D2.array()).exp().matrix();
      break;
    }
    case KernelKind::linear: {
      H.values.noalias() = X.values.transpose() * X.values;
      break;
    }
    case KernelKind::polynomial: {
      Eigen::MatrixXd G;
      G.noalias() = X.values.transpose() * X.values;
      H.values = (G.array() + spec.a).pow(spec.b).matrix();
      break;
    }
  }

  // Wash out floating-point asymmetry from the gram products.
  H.values = 0.5 * (H.values + H.values.transpose()).eval();

  if (!H.values.allFinite())
    throw NonFiniteError("kernel " + spec.describe() +
                         " produced non-finite entries");
  return H;
}

KernelMatrix normalize_kernel(const KernelMatrix& H,
                              std::size_t* clipped_out) {
  const double* data = H.values.data();
  const std::size_t size = static_cast<std::size_t>(H.values.size());
  const double max_entry = simd::max_value(data, size);
  if (!(max_entry > 0.0))
    throw NonPositiveKernelError("kernel " + H.spec.describe() +
                                 " has no strictly positive entry");

  KernelMatrix out;
  out.spec = H.spec;
  out.normalized = true;
  out.values.resize(H.values.rows(), H.values.cols());
  simd::divide(data, size, max_entry, out.values.data());
  const std::size_t clipped =
      simd::clip_nonneg(out.values.data(), size);
  if (clipped_out) *clipped_out = clipped;
  return out;
}

std::vector<KernelSpec> standard_bank_specs() {
  std::vector<KernelSpec> specs;
  for (double t : {0.01, 0.05, 0.1, 1.0, 10.0, 50.0, 100.0})
    specs.push_back(KernelSpec::gaussian(t));
  specs.push_back(KernelSpec::linear());
  for (double a : {0.0, 1.0})
    for (int b : {2, 4}) specs.push_back(KernelSpec::polynomial(a, b));
  return specs;
}

KernelBank build_bank(const FeatureMatrix& X,
                      const std::vector<KernelSpec>& specs) {
  validate_features(X);
  if (specs.empty()) throw Error("kernel bank needs at least one spec");

  bool any_gaussian = false;
  for (const auto& s : specs)
    if (s.kind == KernelKind::gaussian) any_gaussian = true;
  const double d_max = any_gaussian ? max_pairwise_distance(X) : 0.0;

  KernelBank bank;
  bank.kernels.reserve(specs.size());
  for (const auto& spec : specs) {
    std::size_t clipped = 0;
    bank.kernels.push_back(
        normalize_kernel(build_kernel(X, spec, d_max), &clipped));
    if (clipped > 0) {
      std::ostringstream os;
      os << spec.describe() << ": clipped " << clipped
         << " negative entries to 0 after [0,1] scaling";
      bank.provenance_log.push_back(os.str());
    }
  }
  return bank;
}

KernelBank build_standard_bank(const FeatureMatrix& X) {
  return build_bank(X, standard_bank_specs());
}

std::uint64_t dataset_hash(const FeatureMatrix& X) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](const void* p, std::size_t len) {
    const unsigned char* bytes = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= bytes[i];
      h *= 1099511628211ull;
    }
  };
  const std::int64_t rows = X.values.rows();
  const std::int64_t cols = X.values.cols();
  mix(&rows, sizeof(rows));
  mix(&cols, sizeof(cols));
  mix(X.values.data(), sizeof(double) * static_cast<std::size_t>(X.values.size()));
  return h;
}

}  // namespace kergraph
