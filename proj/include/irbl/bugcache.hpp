#pragma once

#include <string>
#include <vector>

#include "irbl/corpus.hpp"
#include "irbl/tracescore.hpp"

namespace irbl {

enum class BugCacheCutoff { created_date, resolved_date };

struct BugCacheConfig {
  int window_days = 15;                                    // k
  BugCacheCutoff cutoff = BugCacheCutoff::created_date;
  std::string fix_regex = "(.*fix.*)|(.*bug.*)";           // applied to lowercased messages
  bool allow_leakage = false;  // required for the resolved_date cutoff
};

// Cutoff instant for the query under cfg; resolved_date needs allow_leakage
// and a resolved query.
std::int64_t bugcache_cutoff_time(const IssueReport& query, const BugCacheConfig& cfg);

// Decay term of the history score for a commit t_c days before the cutoff,
// with window length k: 1 / (1 + e^(12 * (1 - (k - t_c)/k))).
double bugcache_term(double t_c_days, double k_days);

// Fix commits inside [cutoff - k days, cutoff) whose lowercased message matches
// fix_regex or which start with a known bug id (whole token).
std::vector<const CommitRecord*> find_fix_commits(const CommitLog& log, const IssueCorpus& corpus,
                                                  const IssueReport& query,
                                                  const BugCacheConfig& cfg);

// Sums the decay term per source file over the selected commits; only files in
// the snapshot are scored. With the created_date cutoff, any contributing
// commit at or after the query's creation trips an invariant error.
ScoreTable bugcache_score(const std::vector<const CommitRecord*>& commits,
                          const IssueReport& query, const BugCacheConfig& cfg,
                          const FileSnapshot& snapshot);

}  // namespace irbl
