#include "irbl/composer.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "irbl/errors.hpp"

namespace irbl {

FusionKind parse_fusion_kind(std::string_view name) {
  static const std::map<std::string, FusionKind, std::less<>> kinds = {
      {"fixed_weight", FusionKind::fixed_weight},
      {"fixed", FusionKind::fixed_weight},
      {"combsum", FusionKind::combsum},
      {"combmnz", FusionKind::combmnz},
      {"combanz", FusionKind::combanz},
      {"corrb", FusionKind::corrb},
      {"borda", FusionKind::borda},
      {"lr", FusionKind::lr},
      {"dt", FusionKind::dt},
      {"rf", FusionKind::rf},
      {"mlp", FusionKind::mlp},
  };
  auto it = kinds.find(name);
  if (it == kinds.end()) throw Error(Errc::ConfigError, "unknown composer: " + std::string(name));
  return it->second;
}

const char* fusion_kind_name(FusionKind kind) {
  switch (kind) {
    case FusionKind::fixed_weight: return "fixed_weight";
    case FusionKind::combsum: return "combsum";
    case FusionKind::combmnz: return "combmnz";
    case FusionKind::combanz: return "combanz";
    case FusionKind::corrb: return "corrb";
    case FusionKind::borda: return "borda";
    case FusionKind::lr: return "lr";
    case FusionKind::dt: return "dt";
    case FusionKind::rf: return "rf";
    case FusionKind::mlp: return "mlp";
  }
  return "?";
}

bool is_supervised(FusionKind kind) {
  return kind == FusionKind::lr || kind == FusionKind::dt || kind == FusionKind::rf ||
         kind == FusionKind::mlp;
}

std::vector<FeatureRow> assemble_features(const FileSnapshot& snapshot, const ScoreTable& trace,
                                          const ScoreTable& history, const ScoreTable& structure,
                                          const std::set<std::string>& truth) {
  if (snapshot.files.empty())
    throw Error(Errc::EmptySnapshot, "no candidate files at the query's creation date");
  std::vector<FeatureRow> rows;
  rows.reserve(snapshot.files.size());
  for (const auto& path : snapshot.files) {
    FeatureRow row;
    row.file_path = path;
    row.susp_r = trace.get(path);
    row.susp_h = history.get(path);
    row.susp_s = structure.get(path);
    row.label = truth.count(path) > 0;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<FeatureRow> normalize_per_query(std::vector<FeatureRow> rows) {
  if (rows.empty()) return rows;
  auto scale = [&rows](auto member) {
    double lo = rows[0].*member, hi = rows[0].*member;
    for (const auto& r : rows) {
      lo = std::min(lo, r.*member);
      hi = std::max(hi, r.*member);
    }
    const double span = hi - lo;
    for (auto& r : rows) r.*member = span > 0.0 ? (r.*member - lo) / span : 0.0;
  };
  scale(&FeatureRow::susp_r);
  scale(&FeatureRow::susp_h);
  scale(&FeatureRow::susp_s);
  return rows;
}

RankedList make_ranked_list(const std::string& bug_id, const std::vector<FeatureRow>& rows,
                            const std::vector<double>& scores) {
  RankedList out;
  out.bug_id = bug_id;
  out.candidates.reserve(rows.size());
  for (size_t i = 0; i < rows.size(); ++i) out.candidates.emplace_back(rows[i].file_path, scores[i]);
  std::sort(out.candidates.begin(), out.candidates.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  return out;
}

namespace {

// 1-based ranks of one component under the global tie-break rule.
std::vector<int> component_ranks(const std::vector<FeatureRow>& rows, double FeatureRow::*member) {
  std::vector<size_t> order(rows.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    const double sa = rows[a].*member, sb = rows[b].*member;
    return sa != sb ? sa > sb : rows[a].file_path < rows[b].file_path;
  });
  std::vector<int> rank(rows.size());
  for (size_t pos = 0; pos < order.size(); ++pos) rank[order[pos]] = static_cast<int>(pos) + 1;
  return rank;
}

constexpr double FeatureRow::*kComponents[3] = {&FeatureRow::susp_r, &FeatureRow::susp_h,
                                                &FeatureRow::susp_s};

}  // namespace

RankedList fuse_fixed(const std::string& bug_id, const std::vector<FeatureRow>& rows, double a,
                      double b) {
  std::vector<double> scores(rows.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    const double rs = a * rows[i].susp_r + (1.0 - a) * rows[i].susp_s;
    scores[i] = b * rows[i].susp_h + (1.0 - b) * rs;
  }
  return make_ranked_list(bug_id, rows, scores);
}

RankedList fuse_comb(const std::string& bug_id, const std::vector<FeatureRow>& rows,
                     CombVariant variant) {
  std::vector<double> scores(rows.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    const auto f = rows[i].features();
    const double sum = f[0] + f[1] + f[2];
    const int nonzero = (f[0] > 0.0) + (f[1] > 0.0) + (f[2] > 0.0);
    switch (variant) {
      case CombVariant::sum: scores[i] = sum; break;
      case CombVariant::mnz: scores[i] = sum * nonzero; break;
      case CombVariant::anz: scores[i] = nonzero > 0 ? sum / nonzero : 0.0; break;
    }
  }
  return make_ranked_list(bug_id, rows, scores);
}

RankedList fuse_borda(const std::string& bug_id, const std::vector<FeatureRow>& rows) {
  const int m = static_cast<int>(rows.size());
  std::vector<double> points(rows.size(), 0.0);
  for (auto member : kComponents) {
    const auto ranks = component_ranks(rows, member);
    for (size_t i = 0; i < rows.size(); ++i) points[i] += m - ranks[i];
  }
  return make_ranked_list(bug_id, rows, points);
}

RankedList fuse_corrb(const std::string& bug_id, const std::vector<FeatureRow>& rows, int top_n) {
  const int m = static_cast<int>(rows.size());
  const int n = std::min(top_n, m);  // clamp when fewer candidates than N
  std::array<std::set<size_t>, 3> tops;
  for (int c = 0; c < 3; ++c) {
    const auto ranks = component_ranks(rows, kComponents[c]);
    for (size_t i = 0; i < rows.size(); ++i)
      if (ranks[i] <= n) tops[c].insert(i);
  }
  std::array<double, 3> weight{};
  for (int c = 0; c < 3; ++c) {
    double overlap = 0.0;
    for (int other = 0; other < 3; ++other) {
      if (other == c) continue;
      size_t inter = 0;
      for (size_t idx : tops[c])
        if (tops[other].count(idx)) ++inter;
      overlap += n > 0 ? static_cast<double>(inter) / n : 0.0;
    }
    weight[c] = 0.5 * overlap;
  }
  std::vector<double> scores(rows.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    const auto f = rows[i].features();
    scores[i] = weight[0] * f[0] + weight[1] * f[1] + weight[2] * f[2];
  }
  return make_ranked_list(bug_id, rows, scores);
}

RankedList fuse(const std::string& bug_id, const std::vector<FeatureRow>& rows,
                const FusionSpec& spec) {
  switch (spec.kind) {
    case FusionKind::fixed_weight: return fuse_fixed(bug_id, rows, spec.a, spec.b);
    case FusionKind::combsum: return fuse_comb(bug_id, rows, CombVariant::sum);
    case FusionKind::combmnz: return fuse_comb(bug_id, rows, CombVariant::mnz);
    case FusionKind::combanz: return fuse_comb(bug_id, rows, CombVariant::anz);
    case FusionKind::corrb: return fuse_corrb(bug_id, rows, spec.top_n);
    case FusionKind::borda: return fuse_borda(bug_id, rows);
    default:
      throw Error(Errc::ConfigError,
                  std::string(fusion_kind_name(spec.kind)) + " needs a trained model");
  }
}

std::pair<std::vector<std::string>, std::vector<std::string>> split_train_test(
    const IssueCorpus& corpus, const TraceIndex& index, const CommitLog& log,
    double train_fraction) {
  std::vector<const IssueReport*> eligible;
  for (const auto& issue : corpus.issues()) {
    if (issue.kind != IssueKind::bug || !issue.resolved_date) continue;
    const auto* commits = index.commits_for(issue.id);
    if (!commits || commits->empty()) continue;
    if (ground_truth(issue, index, log, TruthPolicy::all_changed).empty()) continue;
    eligible.push_back(&issue);
  }
  if (eligible.size() < 5)
    throw Error(Errc::TooFewBugs, "need at least 5 resolved bugs with ground truth, have " +
                                      std::to_string(eligible.size()));
  std::sort(eligible.begin(), eligible.end(), [](const IssueReport* a, const IssueReport* b) {
    return *a->resolved_date != *b->resolved_date ? *a->resolved_date < *b->resolved_date
                                                  : a->id < b->id;
  });
  const size_t n_train = static_cast<size_t>(
      std::ceil(train_fraction * static_cast<double>(eligible.size())));
  std::pair<std::vector<std::string>, std::vector<std::string>> split;
  for (size_t i = 0; i < eligible.size(); ++i)
    (i < n_train ? split.first : split.second).push_back(eligible[i]->id);
  return split;
}

std::vector<FeatureRow> undersample(const std::vector<FeatureRow>& rows, std::uint64_t seed) {
  std::vector<size_t> positives, negatives;
  for (size_t i = 0; i < rows.size(); ++i) (rows[i].label ? positives : negatives).push_back(i);
  if (positives.empty() || negatives.empty())
    throw Error(Errc::SingleClass, "undersampling needs both labels present");

  // Partial Fisher-Yates keeps the selection reproducible across platforms.
  std::mt19937_64 rng(seed);
  const size_t want = std::min(positives.size(), negatives.size());
  for (size_t i = 0; i < want; ++i) {
    const size_t j = i + static_cast<size_t>(rng() % (negatives.size() - i));
    std::swap(negatives[i], negatives[j]);
  }
  negatives.resize(want);

  std::vector<size_t> keep = positives;
  keep.insert(keep.end(), negatives.begin(), negatives.end());
  std::sort(keep.begin(), keep.end());
  std::vector<FeatureRow> out;
  out.reserve(keep.size());
  for (size_t idx : keep) out.push_back(rows[idx]);
  return out;
}

}  // namespace irbl
