#include "irbl/evalmetrics.hpp"

#include <algorithm>
#include <cmath>

#include "irbl/errors.hpp"

namespace irbl {

double average_precision(const RankedList& ranking, const std::set<std::string>& truth) {
  if (truth.empty()) throw Error(Errc::EmptyTruth, "average precision needs a non-empty truth set");
  double hits = 0.0;
  double sum = 0.0;
  for (size_t i = 0; i < ranking.candidates.size(); ++i) {
    if (truth.count(ranking.candidates[i].first)) {
      hits += 1.0;
      sum += hits / static_cast<double>(i + 1);  // P(i) * pos(i)
    }
  }
  return sum / static_cast<double>(truth.size());
}

std::optional<int> first_relevant_rank(const RankedList& ranking,
                                       const std::set<std::string>& truth) {
  for (size_t i = 0; i < ranking.candidates.size(); ++i) {
    if (truth.count(ranking.candidates[i].first)) return static_cast<int>(i + 1);
  }
  return std::nullopt;
}

MetricsReport aggregate(const std::string& project, std::vector<PerBugResult> per_bug,
                        int excluded_empty_truth) {
  if (per_bug.empty()) throw Error(Errc::EmptyCorpus, "aggregate needs at least one evaluated bug");
  MetricsReport report;
  report.project = project;
  report.evaluated = static_cast<int>(per_bug.size());
  report.excluded_empty_truth = excluded_empty_truth;

  double ap_sum = 0.0, rr_sum = 0.0;
  int rr_count = 0, top1 = 0, top5 = 0, top10 = 0;
  for (const auto& r : per_bug) {
    ap_sum += r.ap;
    if (r.first_relevant_rank) {
      rr_sum += 1.0 / *r.first_relevant_rank;
      ++rr_count;
      if (*r.first_relevant_rank <= 1) ++top1;
      if (*r.first_relevant_rank <= 5) ++top5;
      if (*r.first_relevant_rank <= 10) ++top10;
    }
  }
  const double n = static_cast<double>(per_bug.size());
  report.map = ap_sum / n;
  report.mrr = rr_count > 0 ? rr_sum / rr_count : 0.0;
  report.excluded_from_mrr = report.evaluated - rr_count;
  report.top1 = top1 / n;
  report.top5 = top5 / n;
  report.top10 = top10 / n;
  report.per_bug = std::move(per_bug);
  return report;
}

namespace {

// Continued-fraction evaluation of the incomplete beta (Numerical Recipes betacf).
double betacf(double a, double b, double x) {
  constexpr int kMaxIter = 200;
  constexpr double kEps = 3.0e-12;
  constexpr double kFpMin = 1.0e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kFpMin) d = kFpMin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log(1.0 - x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
  return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

TTestResult paired_ttest(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw Error(Errc::LengthMismatch, "paired samples have sizes " + std::to_string(a.size()) +
                                          " and " + std::to_string(b.size()));
  const size_t n = a.size();
  if (n < 3) throw Error(Errc::EmptySample, "paired t-test needs at least 3 pairs");

  double mean = 0.0;
  for (size_t i = 0; i < n; ++i) mean += a[i] - b[i];
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i] - mean;
    var += d * d;
  }
  var /= static_cast<double>(n - 1);
  if (var <= 0.0) throw Error(Errc::ZeroVariance, "paired differences have zero variance");

  TTestResult res;
  res.df = static_cast<int>(n) - 1;
  res.t = mean / std::sqrt(var / static_cast<double>(n));
  const double df = static_cast<double>(res.df);
  res.p = incomplete_beta(df / 2.0, 0.5, df / (df + res.t * res.t));
  return res;
}

KsResult ks_test(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw Error(Errc::EmptySample, "K-S test needs non-empty samples");
  std::vector<double> sa(a.begin(), a.end()), sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());

  const double na = static_cast<double>(sa.size());
  const double nb = static_cast<double>(sb.size());
  double d = 0.0;
  size_t i = 0, j = 0;
  while (i < sa.size() && j < sb.size()) {
    const double x = std::min(sa[i], sb[j]);
    while (i < sa.size() && sa[i] <= x) ++i;
    while (j < sb.size() && sb[j] <= x) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }

  KsResult res;
  res.d = d;
  const double ne = na * nb / (na + nb);
  const double sqrt_ne = std::sqrt(ne);
  const double lambda = (sqrt_ne + 0.12 + 0.11 / sqrt_ne) * d;
  // Q_KS(lambda) = 2 * sum_{j>=1} (-1)^(j-1) exp(-2 j^2 lambda^2); the sum is
  // taken as 1 when it fails to converge (tiny lambda), matching Q_KS(0) = 1.
  const double a2 = -2.0 * lambda * lambda;
  double fac = 2.0, sum = 0.0, prev = 0.0;
  double p = 1.0;
  for (int term = 1; term <= 100; ++term) {
    const double contrib = fac * std::exp(a2 * term * term);
    sum += contrib;
    if (std::abs(contrib) <= 0.001 * prev || std::abs(contrib) <= 1e-8 * std::abs(sum)) {
      p = sum;
      break;
    }
    fac = -fac;
    prev = std::abs(contrib);
  }
  res.p = std::clamp(p, 0.0, 1.0);
  return res;
}

}  // namespace irbl
