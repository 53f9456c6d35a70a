#pragma once

#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "irbl/composer.hpp"

namespace irbl {

// AP = sum_i P(i) * pos(i) / |truth|. Truth files missing from the ranking
// simply never contribute. Throws Error(EmptyTruth).
double average_precision(const RankedList& ranking, const std::set<std::string>& truth);

// 1-based rank of the first relevant candidate, if any was retrieved.
std::optional<int> first_relevant_rank(const RankedList& ranking,
                                       const std::set<std::string>& truth);

struct PerBugResult {
  std::string bug_id;
  double ap = 0.0;
  std::optional<int> first_relevant_rank;
};

struct MetricsReport {
  std::string project;
  int evaluated = 0;             // bugs with non-empty ground truth
  int excluded_empty_truth = 0;  // skipped before evaluation, counted here
  int excluded_from_mrr = 0;     // evaluated bugs with no relevant file retrieved
  double map = 0.0;
  double mrr = 0.0;
  double top1 = 0.0;
  double top5 = 0.0;
  double top10 = 0.0;
  std::vector<PerBugResult> per_bug;
};

// MAP = mean AP; MRR = mean 1/rank over bugs that retrieved a relevant file
// (the rest are excluded and counted); Top-k = fraction with a hit at rank <= k.
MetricsReport aggregate(const std::string& project, std::vector<PerBugResult> per_bug,
                        int excluded_empty_truth = 0);

struct TTestResult {
  double t = 0.0;
  int df = 0;
  double p = 0.0;  // two-tailed
};

// Paired t-test; throws LengthMismatch, ZeroVariance.
TTestResult paired_ttest(std::span<const double> a, std::span<const double> b);

struct KsResult {
  double d = 0.0;
  double p = 0.0;
};

// Two-sample Kolmogorov-Smirnov with the asymptotic p-value at effective
// n = na*nb/(na+nb). Throws EmptySample.
KsResult ks_test(std::span<const double> a, std::span<const double> b);

// Regularized incomplete beta function (exposed for the statistics tests).
double incomplete_beta(double a, double b, double x);

}  // namespace irbl
