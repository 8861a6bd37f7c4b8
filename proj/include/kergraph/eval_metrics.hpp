#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace kergraph {

/// Integer labels canonicalized to 0..c-1 (sorted order of the distinct
/// input values).
struct LabelVector {
  std::vector<int> labels;      // canonical, in 0..c-1
  std::vector<int> originals;   // distinct input values, sorted
  int n_classes = 0;

  static LabelVector from(const std::vector<int>& raw);
  std::size_t size() const { return labels.size(); }
};

struct ContingencyTable {
  Eigen::MatrixXi counts;  // c_true x c_pred
  std::size_t n = 0;

  static ContingencyTable from(const LabelVector& truth,
                               const LabelVector& pred);
};

struct OptimalMapping {
  std::vector<int> pred_to_true;  // -1 for clusters assigned to a dummy class
  std::size_t matched = 0;
};

struct MetricReport {
  double acc = 0.0;
  double nmi = 0.0;
  double f_score = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double ari = 0.0;
  double purity = 0.0;
  double entropy = 0.0;      // size-weighted conditional entropy / log2(c_true)
  double entropy_raw = 0.0;  // same, unnormalized, in bits
};

/// One-to-one cluster-to-class assignment maximizing the matched count
/// (Kuhn-Munkres on the contingency benefit, zero-padded when rectangular).
OptimalMapping optimal_mapping(const LabelVector& truth,
                               const LabelVector& pred);

double accuracy(const LabelVector& truth, const LabelVector& pred);

/// Mutual information normalized by max(H(truth), H(pred)).
double nmi(const LabelVector& truth, const LabelVector& pred);

/// Pair-counting F-score/precision/recall, ARI, purity, and conditional
/// entropy of classes within clusters.
MetricReport extended_metrics(const LabelVector& truth,
                              const LabelVector& pred);

// Convenience overloads on raw label vectors.
double accuracy(const std::vector<int>& truth, const std::vector<int>& pred);
double nmi(const std::vector<int>& truth, const std::vector<int>& pred);
MetricReport extended_metrics(const std::vector<int>& truth,
                              const std::vector<int>& pred);

}  // namespace kergraph
