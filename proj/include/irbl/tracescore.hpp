#pragma once

#include <map>
#include <set>
#include <string>

#include "irbl/corpus.hpp"
#include "irbl/textprep.hpp"

namespace irbl {

// Per-query suspiciousness scores for one component.
struct ScoreTable {
  std::string bug_id;
  std::map<std::string, double> scores;

  double get(const std::string& path) const {
    auto it = scores.find(path);
    return it == scores.end() ? 0.0 : it->second;
  }
};

// relaxed: artifacts resolved within one year before the query's creation, even
// if resolved after it. strict: additionally resolved before the query's creation.
enum class CutoffMode { relaxed, strict };

struct TraceGraph {
  std::string root;                                    // query bug id
  std::map<std::string, double> edges;                 // artifact id -> sim weight
  std::map<std::string, std::set<std::string>> fix_sets;
};

struct ArtifactLimits {
  int max_bug_files = 10;
  int max_feature_files = 20;
};

// Step 1 artifact selection: time-domain cutoff plus the changed-file-count
// filter (counted on the artifact's own commits, before any snapshot
// intersection). Artifacts need a resolved date and at least one linked commit.
std::set<std::string> select_artifacts(const IssueReport& query, const IssueCorpus& corpus,
                                       const TraceIndex& index, const CommitLog& log,
                                       CutoffMode mode, ArtifactLimits limits = {});

// Precomputed per-corpus state for scoring many queries: raw fix sets and
// preprocessed issue texts, derived once and then read-only.
struct ArtifactCatalog {
  struct Entry {
    IssueKind kind = IssueKind::bug;
    std::int64_t resolved_date = 0;
    std::set<std::string> fix_set;  // all_changed, no snapshot intersection
  };
  std::map<std::string, Entry> entries;                       // resolved + linked only
  std::map<std::string, std::vector<std::string>> tokens;     // every issue's text

  static ArtifactCatalog build(const IssueCorpus& corpus, const TraceIndex& index,
                               const CommitLog& log);
};

std::set<std::string> select_artifacts(const IssueReport& query, const ArtifactCatalog& catalog,
                                       CutoffMode mode, ArtifactLimits limits = {});

// Builds the per-query vector space over the query plus its candidate
// artifacts (summary ++ " " ++ description each).
VectorSpace build_query_space(const IssueReport& query, const IssueCorpus& corpus,
                              const std::set<std::string>& artifacts);
VectorSpace build_query_space(const IssueReport& query, const ArtifactCatalog& catalog,
                              const std::set<std::string>& artifacts);

// Step 4: edges are cosine similarities, overridden to 1.0 when an explicit
// issue link exists in either direction. Fix sets are the artifacts' changed
// files intersected with the query-time snapshot; empty ones drop out.
TraceGraph build_trace_graph(const IssueReport& query, const std::set<std::string>& artifacts,
                             const VectorSpace& space, const IssueCorpus& corpus,
                             const TraceIndex& index, const CommitLog& log,
                             const FileSnapshot& snapshot);
TraceGraph build_trace_graph(const IssueReport& query, const std::set<std::string>& artifacts,
                             const VectorSpace& space, const IssueCorpus& corpus,
                             const ArtifactCatalog& catalog, const FileSnapshot& snapshot);

// Step 5: score(s) = sum over artifacts with s in fix(a) of sim(a)^2 / |fix(a)|.
ScoreTable trace_score(const TraceGraph& graph);

}  // namespace irbl
