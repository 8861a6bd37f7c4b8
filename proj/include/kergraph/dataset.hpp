#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kergraph/kernel_bank.hpp"

namespace kergraph {

enum class DatasetFormat { dense_csv, sparse_triplet };

struct LabelSpec {
  enum class Kind { none, by_name, by_index };
  Kind kind = Kind::none;
  std::string name;
  int index = -1;

  static LabelSpec none() { return {}; }
  static LabelSpec by_name(std::string n) {
    return {Kind::by_name, std::move(n), -1};
  }
  static LabelSpec by_index(int i) { return {Kind::by_index, "", i}; }
};

struct Dataset {
  FeatureMatrix X;  // m features x n samples
  std::optional<std::vector<int>> labels;
};

/// Dense CSV (rows = samples) or sparse triplet CSV (row, col, value with
/// 0-based indices, duplicate entries accumulate). Features come back
/// transposed to column-sample layout; sample order follows the file.
Dataset load_dataset(const std::string& path, DatasetFormat format,
                     const LabelSpec& label_spec = {},
                     bool has_header = false);

/// One integer label per line (a header line is skipped when requested).
std::vector<int> load_labels_file(const std::string& path,
                                  bool has_header = false);

/// Per-feature z-scoring; constant features are centered only.
void scale_features(FeatureMatrix& X);

}  // namespace kergraph
