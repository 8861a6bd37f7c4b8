#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "kergraph/errors.hpp"
#include "kergraph/eval_metrics.hpp"

using namespace kergraph;

namespace {

// Brute-force accuracy: maximize matches over all injective assignments of
// pred clusters to true classes (factorial enumeration over the padded side).
double accuracy_oracle(const std::vector<int>& truth,
                       const std::vector<int>& pred) {
  const LabelVector t = LabelVector::from(truth);
  const LabelVector p = LabelVector::from(pred);
  const int side = std::max(t.n_classes, p.n_classes);
  std::vector<int> perm(static_cast<std::size_t>(side));
  for (int i = 0; i < side; ++i) perm[static_cast<std::size_t>(i)] = i;

  std::size_t best = 0;
  do {
    std::size_t matched = 0;
    for (std::size_t i = 0; i < t.size(); ++i)
      if (perm[static_cast<std::size_t>(p.labels[i])] == t.labels[i])
        ++matched;
    best = std::max(best, matched);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return static_cast<double>(best) / static_cast<double>(truth.size());
}

// Pair-counting oracle over all O(n^2) pairs.
struct PairCounts {
  double both = 0, truth_only = 0, pred_only = 0, neither = 0;
};
PairCounts count_pairs(const std::vector<int>& truth,
                       const std::vector<int>& pred) {
  PairCounts counts;
  for (std::size_t i = 0; i < truth.size(); ++i)
    for (std::size_t j = i + 1; j < truth.size(); ++j) {
      const bool same_t = truth[i] == truth[j];
      const bool same_p = pred[i] == pred[j];
      if (same_t && same_p) counts.both += 1;
      else if (same_t) counts.truth_only += 1;
      else if (same_p) counts.pred_only += 1;
      else counts.neither += 1;
    }
  return counts;
}

// NMI oracle with its own contingency accumulation.
double nmi_oracle(const std::vector<int>& truth,
                  const std::vector<int>& pred) {
  const double n = static_cast<double>(truth.size());
  const int ct = *std::max_element(truth.begin(), truth.end()) + 1;
  const int cp = *std::max_element(pred.begin(), pred.end()) + 1;
  std::vector<std::vector<double>> joint(
      static_cast<std::size_t>(ct),
      std::vector<double>(static_cast<std::size_t>(cp), 0.0));
  for (std::size_t i = 0; i < truth.size(); ++i)
    joint[static_cast<std::size_t>(truth[i])]
         [static_cast<std::size_t>(pred[i])] += 1.0 / n;

  std::vector<double> pt(static_cast<std::size_t>(ct), 0.0);
  std::vector<double> pp(static_cast<std::size_t>(cp), 0.0);
  for (int a = 0; a < ct; ++a)
    for (int b = 0; b < cp; ++b) {
      pt[static_cast<std::size_t>(a)] +=
          joint[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
      pp[static_cast<std::size_t>(b)] +=
          joint[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
    }
  double mi = 0.0, ht = 0.0, hp = 0.0;
  for (int a = 0; a < ct; ++a)
    for (int b = 0; b < cp; ++b) {
      const double pij =
          joint[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
      if (pij > 0.0)
        mi += pij * std::log(pij / (pt[static_cast<std::size_t>(a)] *
                                    pp[static_cast<std::size_t>(b)]));
    }
  for (double v : pt)
    if (v > 0) ht -= v * std::log(v);
  for (double v : pp)
    if (v > 0) hp -= v * std::log(v);
  if (std::max(ht, hp) == 0.0) return 1.0;
  return mi / std::max(ht, hp);
}

std::vector<int> random_labels(std::size_t n, int c, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dist(0, c - 1);
  std::vector<int> out(n);
  for (auto& v : out) v = dist(rng);
  return out;
}

}  // namespace

TEST_CASE("optimal mapping undoes a pure relabeling") {
  const std::vector<int> truth = {0, 0, 1, 1};
  const std::vector<int> pred = {1, 1, 0, 0};
  const OptimalMapping mapping =
      optimal_mapping(LabelVector::from(truth), LabelVector::from(pred));
  CHECK(mapping.matched == 4);
  CHECK(mapping.pred_to_true[0] == 1);
  CHECK(mapping.pred_to_true[1] == 0);

  const OptimalMapping identity =
      optimal_mapping(LabelVector::from(truth), LabelVector::from(truth));
  CHECK(identity.matched == 4);
  CHECK(identity.pred_to_true[0] == 0);
  CHECK(identity.pred_to_true[1] == 1);
}

TEST_CASE("matched count equals the factorial enumeration") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const std::vector<int> truth = random_labels(12, 3, rng);
    const std::vector<int> pred = random_labels(12, 3, rng);
    CHECK(accuracy(truth, pred) ==
          doctest::Approx(accuracy_oracle(truth, pred)).epsilon(1e-15));
  }
}

TEST_CASE("accuracy basics") {
  CHECK(accuracy({0, 0, 1, 1}, {1, 1, 0, 0}) == 1.0);
  CHECK(accuracy({0, 0, 1, 1}, {0, 1, 0, 1}) ==
        doctest::Approx(accuracy_oracle({0, 0, 1, 1}, {0, 1, 0, 1})));
  CHECK(accuracy({0, 0, 1, 1}, {0, 1, 0, 1}) == 0.5);
  CHECK_THROWS_AS(accuracy({0, 1}, {0, 1, 2}), LengthMismatchError);
}

TEST_CASE("accuracy of a constant prediction meets the class-share bound") {
  const std::vector<int> truth = {0, 0, 1, 1, 2, 2};
  const std::vector<int> pred(6, 0);
  CHECK(accuracy(truth, pred) >= doctest::Approx(1.0 / 3.0));
}

TEST_CASE("nmi of identical nontrivial partitions is 1") {
  CHECK(nmi({0, 1, 0, 1, 2}, {0, 1, 0, 1, 2}) == doctest::Approx(1.0));
  CHECK(nmi({0, 1, 0, 1, 2}, {2, 0, 2, 0, 1}) == doctest::Approx(1.0));
}

TEST_CASE("nmi of a constant prediction is 0") {
  CHECK(nmi({0, 0, 1, 1}, {0, 0, 0, 0}) == 0.0);
}

TEST_CASE("nmi matches the hand-evaluated entropy sums") {
  // contingency [[1,1],[0,2]] over n = 4
  const double mi = 0.25 * std::log(2.0) + 0.25 * std::log(2.0 / 3.0) +
                    0.5 * std::log(4.0 / 3.0);
  const double h_truth = std::log(2.0);
  const double h_pred =
      -(0.25 * std::log(0.25) + 0.75 * std::log(0.75));
  const double expect = mi / std::max(h_truth, h_pred);
  CHECK(nmi({0, 0, 1, 1}, {0, 1, 1, 1}) ==
        doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("nmi is exactly symmetric") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const std::vector<int> a = random_labels(20, 4, rng);
    const std::vector<int> b = random_labels(20, 3, rng);
    CHECK(nmi(a, b) == nmi(b, a));
  }
}

TEST_CASE("metrics are invariant under relabeling") {
  std::mt19937_64 rng(3);
  const std::vector<int> truth = random_labels(30, 3, rng);
  const std::vector<int> pred = random_labels(30, 4, rng);

  std::vector<int> renamed_pred(pred.size());
  const int rename[4] = {17, 3, 42, 8};
  for (std::size_t i = 0; i < pred.size(); ++i)
    renamed_pred[i] = rename[pred[i]];

  const MetricReport a = extended_metrics(truth, pred);
  const MetricReport b = extended_metrics(truth, renamed_pred);
  CHECK(a.acc == doctest::Approx(b.acc).epsilon(1e-12));
  CHECK(a.nmi == doctest::Approx(b.nmi).epsilon(1e-12));
  CHECK(a.f_score == doctest::Approx(b.f_score).epsilon(1e-12));
  CHECK(a.ari == doctest::Approx(b.ari).epsilon(1e-12));
  CHECK(a.purity == doctest::Approx(b.purity).epsilon(1e-12));
  CHECK(a.entropy == doctest::Approx(b.entropy).epsilon(1e-12));
}

TEST_CASE("perfect prediction maxes every metric") {
  const std::vector<int> truth = {0, 0, 1, 1, 2};
  const MetricReport report = extended_metrics(truth, truth);
  CHECK(report.acc == 1.0);
  CHECK(report.nmi == doctest::Approx(1.0));
  CHECK(report.f_score == doctest::Approx(1.0));
  CHECK(report.precision == doctest::Approx(1.0));
  CHECK(report.recall == doctest::Approx(1.0));
  CHECK(report.ari == doctest::Approx(1.0));
  CHECK(report.purity == doctest::Approx(1.0));
  CHECK(report.entropy == 0.0);
  CHECK(report.entropy_raw == 0.0);
}

TEST_CASE("single-cluster prediction: recall 1, precision = same-class share") {
  const std::vector<int> truth = {0, 0, 1, 1};
  const std::vector<int> pred = {0, 0, 0, 0};
  const MetricReport report = extended_metrics(truth, pred);
  CHECK(report.recall == 1.0);
  // 2 same-class pairs out of C(4,2) = 6
  CHECK(report.precision == doctest::Approx(2.0 / 6.0));
  CHECK(report.purity == doctest::Approx(0.5));
}

TEST_CASE("pair metrics match the explicit O(n^2) oracle") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const std::vector<int> truth = random_labels(10, 3, rng);
    const std::vector<int> pred = random_labels(10, 3, rng);
    const MetricReport report = extended_metrics(truth, pred);
    const PairCounts counts = count_pairs(truth, pred);

    const double retrieved = counts.both + counts.pred_only;
    const double relevant = counts.both + counts.truth_only;
    const double precision = retrieved > 0 ? counts.both / retrieved : 1.0;
    const double recall = relevant > 0 ? counts.both / relevant : 1.0;
    CHECK(report.precision == doctest::Approx(precision).epsilon(1e-12));
    CHECK(report.recall == doctest::Approx(recall).epsilon(1e-12));
    if (precision + recall > 0)
      CHECK(report.f_score ==
            doctest::Approx(2 * precision * recall / (precision + recall))
                .epsilon(1e-12));

    // pair-count form of the adjusted index
    const double a = counts.both, b = counts.truth_only, c = counts.pred_only,
                 d = counts.neither;
    const double denom = (a + b) * (b + d) + (a + c) * (c + d);
    if (denom > 0)
      CHECK(report.ari ==
            doctest::Approx(2 * (a * d - b * c) / denom).epsilon(1e-12));

    CHECK(report.nmi == doctest::Approx(nmi_oracle(truth, pred)).epsilon(1e-12));
  }
}

TEST_CASE("ari is 1 for permuted-identical partitions, ~0 for independent") {
  std::mt19937_64 rng(5);
  const std::vector<int> truth = random_labels(40, 3, rng);
  std::vector<int> renamed(truth.size());
  for (std::size_t i = 0; i < truth.size(); ++i)
    renamed[i] = (truth[i] + 1) % 3;
  CHECK(extended_metrics(truth, renamed).ari == doctest::Approx(1.0));

  double mean = 0.0;
  const int draws = 1000;
  for (int trial = 0; trial < draws; ++trial) {
    const std::vector<int> a = random_labels(60, 3, rng);
    const std::vector<int> b = random_labels(60, 3, rng);
    mean += extended_metrics(a, b).ari;
  }
  mean /= draws;
  CHECK(std::abs(mean) <= 0.02);
}

TEST_CASE("entropy is the size-weighted conditional class entropy in bits") {
  // one pure cluster, one 50/50 cluster of the same size
  const std::vector<int> truth = {0, 0, 0, 0, 1, 1};
  const std::vector<int> pred = {0, 0, 0, 0, 1, 1};
  CHECK(extended_metrics(truth, pred).entropy_raw == 0.0);

  const std::vector<int> pred2 = {0, 0, 1, 1, 1, 1};
  // cluster 0: pure class 0 (4-2=2 of class 0 ... sizes: cluster0 = {0,0},
  // cluster1 = {0,0,1,1}) -> H(cluster0) = 0, H(cluster1) = 1 bit
  const MetricReport report = extended_metrics(truth, pred2);
  CHECK(report.entropy_raw == doctest::Approx((4.0 / 6.0) * 1.0));
  CHECK(report.entropy == doctest::Approx((4.0 / 6.0) * 1.0 / 1.0));
}

TEST_CASE("rectangular cluster counts are handled by zero padding") {
  const std::vector<int> truth = {0, 0, 1, 1, 2, 2};
  const std::vector<int> pred = {0, 0, 1, 1, 1, 1};  // fewer clusters
  CHECK(accuracy(truth, pred) == doctest::Approx(4.0 / 6.0));

  const std::vector<int> pred2 = {0, 1, 2, 3, 4, 5};  // more clusters
  CHECK(accuracy(truth, pred2) == doctest::Approx(3.0 / 6.0));
}
