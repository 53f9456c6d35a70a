#include "irbl/bugcache.hpp"

#include <cmath>
#include <regex>

#include "irbl/errors.hpp"
#include "irbl/util.hpp"

namespace irbl {

std::int64_t bugcache_cutoff_time(const IssueReport& query, const BugCacheConfig& cfg) {
  if (cfg.cutoff == BugCacheCutoff::created_date) return query.created_date;
  if (!cfg.allow_leakage)
    throw Error(Errc::LeakageGuard,
                "resolved_date cutoff uses post-creation commits; pass --allow-leakage to "
                "reproduce that setting");
  if (!query.resolved_date)
    throw Error(Errc::MissingField, query.id + " has no resolved_date for the resolved cutoff");
  return *query.resolved_date;
}

double bugcache_term(double t_c_days, double k_days) {
  return 1.0 / (1.0 + std::exp(12.0 * (1.0 - (k_days - t_c_days) / k_days)));
}

namespace {

// Message starts with a known bug id as a whole token.
bool starts_with_bug_id(const std::string& message, const IssueCorpus& corpus) {
  auto is_id_char = [](char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
           c == '_' || c == '-';
  };
  size_t end = 0;
  while (end < message.size() && is_id_char(message[end])) ++end;
  if (end == 0) return false;
  const IssueReport* issue = corpus.find(message.substr(0, end));
  return issue && issue->kind == IssueKind::bug;
}

}  // namespace

std::vector<const CommitRecord*> find_fix_commits(const CommitLog& log, const IssueCorpus& corpus,
                                                  const IssueReport& query,
                                                  const BugCacheConfig& cfg) {
  const std::int64_t cutoff = bugcache_cutoff_time(query, cfg);
  const std::int64_t window_start = cutoff - static_cast<std::int64_t>(cfg.window_days) * 86400;
  const std::regex fix_re(cfg.fix_regex);
  std::vector<const CommitRecord*> selected;
  for (const auto& commit : log.commits()) {
    if (commit.timestamp < window_start) continue;
    if (commit.timestamp >= cutoff) break;  // log is chronologically sorted
    if (std::regex_search(to_lower(commit.message), fix_re) ||
        starts_with_bug_id(commit.message, corpus))
      selected.push_back(&commit);
  }
  return selected;
}

ScoreTable bugcache_score(const std::vector<const CommitRecord*>& commits,
                          const IssueReport& query, const BugCacheConfig& cfg,
                          const FileSnapshot& snapshot) {
  const std::int64_t cutoff = bugcache_cutoff_time(query, cfg);
  const double k = static_cast<double>(cfg.window_days);
  ScoreTable table;
  table.bug_id = query.id;
  for (const CommitRecord* commit : commits) {
    if (cfg.cutoff == BugCacheCutoff::created_date && commit->timestamp >= query.created_date)
      throw Error(Errc::InvariantViolation,
                  "history scoring saw commit " + commit->hash + " at/after creation of " + query.id);
    const double t_c = static_cast<double>(cutoff - commit->timestamp) / 86400.0;
    const double term = bugcache_term(t_c, k);
    for (const auto& ch : commit->changes) {
      if (!ch.is_source || ch.kind == ChangeKind::deleted) continue;
      if (snapshot.contains(*ch.new_path)) table.scores[*ch.new_path] += term;
    }
  }
  return table;
}

}  // namespace irbl
