#include "irbl/tracescore.hpp"

#include <functional>

#include "irbl/errors.hpp"

namespace irbl {

namespace {
constexpr std::int64_t kYearSeconds = 365ll * 86400;
}

std::set<std::string> select_artifacts(const IssueReport& query, const IssueCorpus& corpus,
                                       const TraceIndex& index, const CommitLog& log,
                                       CutoffMode mode, ArtifactLimits limits) {
  std::set<std::string> selected;
  for (const auto& artifact : corpus.issues()) {
    if (artifact.id == query.id) continue;
    if (!artifact.resolved_date) continue;
    const std::int64_t resolved = *artifact.resolved_date;
    if (resolved <= query.created_date - kYearSeconds) continue;
    if (mode == CutoffMode::strict && resolved >= query.created_date) continue;
    const auto* commits = index.commits_for(artifact.id);
    if (!commits || commits->empty()) continue;
    // Changed-file cap on the artifact's own commits (no snapshot intersection).
    std::set<std::string> fix = ground_truth(artifact, index, log, TruthPolicy::all_changed);
    const int cap = artifact.kind == IssueKind::bug ? limits.max_bug_files : limits.max_feature_files;
    if (static_cast<int>(fix.size()) > cap) continue;
    selected.insert(artifact.id);
  }
  return selected;
}

ArtifactCatalog ArtifactCatalog::build(const IssueCorpus& corpus, const TraceIndex& index,
                                       const CommitLog& log) {
  ArtifactCatalog catalog;
  for (const auto& issue : corpus.issues()) {
    catalog.tokens.emplace(issue.id, preprocess(issue.text()));
    if (!issue.resolved_date) continue;
    const auto* commits = index.commits_for(issue.id);
    if (!commits || commits->empty()) continue;
    Entry entry;
    entry.kind = issue.kind;
    entry.resolved_date = *issue.resolved_date;
    entry.fix_set = ground_truth(issue, index, log, TruthPolicy::all_changed);
    catalog.entries.emplace(issue.id, std::move(entry));
  }
  return catalog;
}

std::set<std::string> select_artifacts(const IssueReport& query, const ArtifactCatalog& catalog,
                                       CutoffMode mode, ArtifactLimits limits) {
  std::set<std::string> selected;
  for (const auto& [id, entry] : catalog.entries) {
    if (id == query.id) continue;
    if (entry.resolved_date <= query.created_date - kYearSeconds) continue;
    if (mode == CutoffMode::strict && entry.resolved_date >= query.created_date) continue;
    const int cap = entry.kind == IssueKind::bug ? limits.max_bug_files : limits.max_feature_files;
    if (static_cast<int>(entry.fix_set.size()) > cap) continue;
    selected.insert(id);
  }
  return selected;
}

VectorSpace build_query_space(const IssueReport& query, const IssueCorpus& corpus,
                              const std::set<std::string>& artifacts) {
  std::map<std::string, std::vector<std::string>> docs;
  docs.emplace(query.id, preprocess(query.text()));
  for (const auto& id : artifacts) docs.emplace(id, preprocess(corpus.at(id).text()));
  return VectorSpace::build(docs);
}

VectorSpace build_query_space(const IssueReport& query, const ArtifactCatalog& catalog,
                              const std::set<std::string>& artifacts) {
  std::map<std::string, std::vector<std::string>> docs;
  docs.emplace(query.id, catalog.tokens.at(query.id));
  for (const auto& id : artifacts) docs.emplace(id, catalog.tokens.at(id));
  return VectorSpace::build(docs);
}

namespace {

TraceGraph build_graph_impl(const IssueReport& query, const std::set<std::string>& artifacts,
                            const VectorSpace& space, const IssueCorpus& corpus,
                            const FileSnapshot& snapshot,
                            const std::function<std::set<std::string>(const std::string&)>& fix_of) {
  TraceGraph graph;
  graph.root = query.id;
  for (const auto& id : artifacts) {
    const IssueReport& artifact = corpus.at(id);
    double weight = cosine(space.doc_vector(query.id), space.doc_vector(id));
    const bool explicit_link =
        query.linked_issue_ids.count(id) > 0 || artifact.linked_issue_ids.count(query.id) > 0;
    if (explicit_link) weight = 1.0;

    std::set<std::string> kept;
    for (const auto& path : fix_of(id))
      if (snapshot.contains(path)) kept.insert(path);
    if (kept.empty()) continue;

    graph.edges.emplace(id, weight);
    graph.fix_sets.emplace(id, std::move(kept));
  }
  return graph;
}

}  // namespace

TraceGraph build_trace_graph(const IssueReport& query, const std::set<std::string>& artifacts,
                             const VectorSpace& space, const IssueCorpus& corpus,
                             const TraceIndex& index, const CommitLog& log,
                             const FileSnapshot& snapshot) {
  return build_graph_impl(query, artifacts, space, corpus, snapshot,
                          [&](const std::string& id) {
                            return ground_truth(corpus.at(id), index, log,
                                                TruthPolicy::all_changed);
                          });
}

TraceGraph build_trace_graph(const IssueReport& query, const std::set<std::string>& artifacts,
                             const VectorSpace& space, const IssueCorpus& corpus,
                             const ArtifactCatalog& catalog, const FileSnapshot& snapshot) {
  return build_graph_impl(query, artifacts, space, corpus, snapshot,
                          [&](const std::string& id) { return catalog.entries.at(id).fix_set; });
}

ScoreTable trace_score(const TraceGraph& graph) {
  ScoreTable table;
  table.bug_id = graph.root;
  for (const auto& [artifact_id, fix_set] : graph.fix_sets) {
    const double sim = graph.edges.at(artifact_id);
    const double share = sim * sim / static_cast<double>(fix_set.size());
    for (const auto& path : fix_set) table.scores[path] += share;
  }
  return table;
}

}  // namespace irbl
