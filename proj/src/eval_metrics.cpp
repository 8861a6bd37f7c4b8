#include "kergraph/eval_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "kergraph/errors.hpp"

namespace kergraph {

LabelVector LabelVector::from(const std::vector<int>& raw) {
  if (raw.empty()) throw Error("label vector must be nonempty");
  LabelVector out;
  out.originals.assign(raw.begin(), raw.end());
  std::sort(out.originals.begin(), out.originals.end());
  out.originals.erase(
      std::unique(out.originals.begin(), out.originals.end()),
      out.originals.end());
  out.n_classes = static_cast<int>(out.originals.size());

  std::map<int, int> index;
  for (int c = 0; c < out.n_classes; ++c)
    index[out.originals[static_cast<std::size_t>(c)]] = c;
  out.labels.reserve(raw.size());
  for (int v : raw) out.labels.push_back(index.at(v));
  return out;
}

ContingencyTable ContingencyTable::from(const LabelVector& truth,
                                        const LabelVector& pred) {
  if (truth.size() != pred.size())
    throw LengthMismatchError("label vectors differ in length");
  ContingencyTable table;
  table.n = truth.size();
  table.counts = Eigen::MatrixXi::Zero(truth.n_classes, pred.n_classes);
  for (std::size_t i = 0; i < truth.size(); ++i)
    ++table.counts(truth.labels[i], pred.labels[i]);
  return table;
}

namespace {

// Min-cost assignment on a square matrix via shortest augmenting paths with
// potentials. cost(i, j) is exact here (negated integer counts), so the
// double arithmetic introduces no rounding.
std::vector<int> assign_min_cost(const Eigen::MatrixXd& cost) {
  const int n = static_cast<int>(cost.rows());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<double> v(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<int> p(static_cast<std::size_t>(n) + 1, 0);
  std::vector<int> way(static_cast<std::size_t>(n) + 1, 0);

  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(n) + 1, inf);
    std::vector<bool> used(static_cast<std::size_t>(n) + 1, false);
    do {
      used[static_cast<std::size_t>(j0)] = true;
      const int i0 = p[static_cast<std::size_t>(j0)];
      int j1 = -1;
      double delta = inf;
      for (int j = 1; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const double cur = cost(i0 - 1, j - 1) -
                           u[static_cast<std::size_t>(i0)] -
                           v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(p[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (p[static_cast<std::size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<std::size_t>(j0)];
      p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }

  // p[j] = row matched to column j (1-indexed).
  std::vector<int> row_of_col(static_cast<std::size_t>(n));
  for (int j = 1; j <= n; ++j)
    row_of_col[static_cast<std::size_t>(j - 1)] =
        p[static_cast<std::size_t>(j)] - 1;
  return row_of_col;
}

double entropy_nats(const std::vector<double>& probs) {
  double h = 0.0;
  for (double p : probs)
    if (p > 0.0) h -= p * std::log(p);
  return h;
}

inline double pairs_of(double m) { return 0.5 * m * (m - 1.0); }

}  // namespace

OptimalMapping optimal_mapping(const LabelVector& truth,
                               const LabelVector& pred) {
  const ContingencyTable table = ContingencyTable::from(truth, pred);
  const int side = std::max(truth.n_classes, pred.n_classes);

  // Benefit = matched count; dummies contribute zero benefit.
  Eigen::MatrixXd cost = Eigen::MatrixXd::Zero(side, side);
  for (int t = 0; t < truth.n_classes; ++t)
    for (int c = 0; c < pred.n_classes; ++c)
      cost(t, c) = -static_cast<double>(table.counts(t, c));

  const std::vector<int> row_of_col = assign_min_cost(cost);

  OptimalMapping mapping;
  mapping.pred_to_true.assign(static_cast<std::size_t>(pred.n_classes), -1);
  for (int c = 0; c < pred.n_classes; ++c) {
    const int t = row_of_col[static_cast<std::size_t>(c)];
    if (t < truth.n_classes) {
      mapping.pred_to_true[static_cast<std::size_t>(c)] = t;
      mapping.matched += static_cast<std::size_t>(table.counts(t, c));
    }
  }
  return mapping;
}

double accuracy(const LabelVector& truth, const LabelVector& pred) {
  const OptimalMapping mapping = optimal_mapping(truth, pred);
  return static_cast<double>(mapping.matched) /
         static_cast<double>(truth.size());
}

double nmi(const LabelVector& truth, const LabelVector& pred) {
  // NMI is symmetric; canonicalize the argument order so both call
  // directions run the identical accumulation and agree bitwise.
  if (pred.labels < truth.labels) return nmi(pred, truth);
  const ContingencyTable table = ContingencyTable::from(truth, pred);
  const double n = static_cast<double>(table.n);

  std::vector<double> pt(static_cast<std::size_t>(truth.n_classes), 0.0);
  std::vector<double> pp(static_cast<std::size_t>(pred.n_classes), 0.0);
  for (int t = 0; t < truth.n_classes; ++t)
    for (int c = 0; c < pred.n_classes; ++c) {
      const double pij = table.counts(t, c) / n;
      pt[static_cast<std::size_t>(t)] += pij;
      pp[static_cast<std::size_t>(c)] += pij;
    }

  const double ht = entropy_nats(pt);
  const double hp = entropy_nats(pp);
  const double hmax = std::max(ht, hp);
  if (hmax == 0.0) return 1.0;  // both single-cluster: identical partitions

  double mi = 0.0;
  for (int t = 0; t < truth.n_classes; ++t)
    for (int c = 0; c < pred.n_classes; ++c) {
      const double pij = table.counts(t, c) / n;
      if (pij > 0.0)
        mi += pij * std::log(pij / (pt[static_cast<std::size_t>(t)] *
                                    pp[static_cast<std::size_t>(c)]));
    }
  return std::clamp(mi / hmax, 0.0, 1.0);
}

MetricReport extended_metrics(const LabelVector& truth,
                              const LabelVector& pred) {
  const ContingencyTable table = ContingencyTable::from(truth, pred);
  const double n = static_cast<double>(table.n);

  MetricReport report;
  report.acc = accuracy(truth, pred);
  report.nmi = nmi(truth, pred);

  Eigen::VectorXd class_sizes =
      table.counts.cast<double>().rowwise().sum();
  Eigen::VectorXd cluster_sizes =
      table.counts.cast<double>().colwise().sum();

  double same_both = 0.0;  // pairs together in truth and prediction
  for (int t = 0; t < truth.n_classes; ++t)
    for (int c = 0; c < pred.n_classes; ++c)
      same_both += pairs_of(static_cast<double>(table.counts(t, c)));
  double same_true = 0.0;
  for (int t = 0; t < truth.n_classes; ++t)
    same_true += pairs_of(class_sizes[t]);
  double same_pred = 0.0;
  for (int c = 0; c < pred.n_classes; ++c)
    same_pred += pairs_of(cluster_sizes[c]);

  report.precision = same_pred > 0.0 ? same_both / same_pred
                                     : (same_true == 0.0 ? 1.0 : 0.0);
  report.recall = same_true > 0.0 ? same_both / same_true
                                  : (same_pred == 0.0 ? 1.0 : 0.0);
  report.f_score =
      report.precision + report.recall > 0.0
          ? 2.0 * report.precision * report.recall /
                (report.precision + report.recall)
          : 0.0;

  const double total_pairs = pairs_of(n);
  const double expected = same_true * same_pred / total_pairs;
  const double max_index = 0.5 * (same_true + same_pred);
  report.ari = max_index == expected
                   ? 1.0  // both partitions trivial in the same way
                   : (same_both - expected) / (max_index - expected);

  double purity = 0.0;
  for (int c = 0; c < pred.n_classes; ++c)
    purity += static_cast<double>(table.counts.col(c).maxCoeff());
  report.purity = purity / n;

  // Conditional class entropy within each cluster, cluster-size weighted,
  // in bits; the normalized variant divides by log2(#classes).
  double cond = 0.0;
  for (int c = 0; c < pred.n_classes; ++c) {
    if (cluster_sizes[c] == 0.0) continue;
    double h = 0.0;
    for (int t = 0; t < truth.n_classes; ++t) {
      const double q = table.counts(t, c) / cluster_sizes[c];
      if (q > 0.0) h -= q * std::log2(q);
    }
    cond += (cluster_sizes[c] / n) * h;
  }
  report.entropy_raw = cond;
  report.entropy =
      truth.n_classes > 1 ? cond / std::log2(truth.n_classes) : 0.0;
  return report;
}

double accuracy(const std::vector<int>& truth, const std::vector<int>& pred) {
  return accuracy(LabelVector::from(truth), LabelVector::from(pred));
}

double nmi(const std::vector<int>& truth, const std::vector<int>& pred) {
  return nmi(LabelVector::from(truth), LabelVector::from(pred));
}

MetricReport extended_metrics(const std::vector<int>& truth,
                              const std::vector<int>& pred) {
  return extended_metrics(LabelVector::from(truth), LabelVector::from(pred));
}

}  // namespace kergraph
