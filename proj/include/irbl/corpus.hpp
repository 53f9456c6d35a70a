#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace irbl {

enum class IssueKind { bug, feature };

struct IssueReport {
  std::string id;
  IssueKind kind = IssueKind::bug;
  std::string summary;
  std::string description;
  std::int64_t created_date = 0;                 // UTC epoch seconds
  std::optional<std::int64_t> resolved_date;
  std::set<std::string> linked_issue_ids;

  // TraceScore document text.
  std::string text() const { return summary + " " + description; }
};

enum class ChangeKind { added, modified, deleted, renamed };

struct FileChange {
  std::optional<std::string> old_path;
  std::optional<std::string> new_path;
  ChangeKind kind = ChangeKind::modified;
  bool is_source = false;  // extension filter applied at load time
};

struct CommitRecord {
  std::string hash;
  std::int64_t timestamp = 0;
  std::string message;
  std::vector<FileChange> changes;
};

class IssueCorpus {
public:
  void add(IssueReport issue);  // throws DuplicateId

  const IssueReport* find(const std::string& id) const;
  const IssueReport& at(const std::string& id) const;  // throws when absent
  const std::vector<IssueReport>& issues() const { return issues_; }
  std::size_t size() const { return issues_.size(); }
  std::size_t bug_count() const;

  // Ids rejected at load time (resolved_date < created_date), with diagnostics.
  const std::vector<std::string>& rejected_ids() const { return rejected_ids_; }
  std::string rejection_diagnostic() const;
  void note_rejected(const std::string& id) { rejected_ids_.push_back(id); }

private:
  std::vector<IssueReport> issues_;
  std::map<std::string, std::size_t> by_id_;
  std::vector<std::string> rejected_ids_;
};

class CommitLog {
public:
  // Sorts chronologically (timestamp, then hash) and validates hash uniqueness.
  explicit CommitLog(std::vector<CommitRecord> commits);
  CommitLog() = default;

  const std::vector<CommitRecord>& commits() const { return commits_; }
  const CommitRecord* find(const std::string& hash) const;
  std::size_t size() const { return commits_.size(); }

private:
  std::vector<CommitRecord> commits_;
  std::map<std::string, std::size_t> by_hash_;
};

struct TraceIndex {
  std::map<std::string, std::set<std::string>> issue_to_commits;
  std::map<std::string, std::set<std::string>> commit_to_issues;

  void add_link(const std::string& issue_id, const std::string& commit_hash) {
    issue_to_commits[issue_id].insert(commit_hash);
    commit_to_issues[commit_hash].insert(issue_id);
  }
  const std::set<std::string>* commits_for(const std::string& issue_id) const {
    auto it = issue_to_commits.find(issue_id);
    return it == issue_to_commits.end() ? nullptr : &it->second;
  }
};

struct FileSnapshot {
  std::int64_t as_of = 0;
  std::set<std::string> files;

  bool contains(const std::string& path) const { return files.count(path) > 0; }
};

enum class TruthPolicy { all_changed, exclude_added };

enum class IssueFormat { jsonl, csv };

struct CorpusOptions {
  std::set<std::string> source_extensions = {".java", ".py"};
};

// issues.jsonl: one object per line with id, kind, summary, description,
// created_date, resolved_date, links. CSV variant: same columns, links
// separated by ';'. Records with resolved_date < created_date are rejected
// and reported via IssueCorpus::rejected_ids().
IssueCorpus load_issues(const std::filesystem::path& path, IssueFormat format);

// source may be a commits.jsonl export or a local git clone (directory).
CommitLog load_commits(const std::filesystem::path& source,
                       const CorpusOptions& opts = {});

// Links a commit to an issue when an explicit (issue,commit) record says so or
// the commit message contains the issue id as a whole token.
TraceIndex link_issues_commits(
    const IssueCorpus& corpus, const CommitLog& log,
    const std::vector<std::pair<std::string, std::string>>& explicit_links = {});

// links.csv rows: issue_id,commit_hash (header optional).
std::vector<std::pair<std::string, std::string>> load_links_csv(
    const std::filesystem::path& path);

// Source files that exist just before `as_of`: replays every change with
// timestamp < as_of; renames follow the newest path, deletions drop the file.
FileSnapshot snapshot_files(const CommitLog& log, std::int64_t as_of);

// Files changed by the issue's linked commits. Deleted files contribute their
// old path; under exclude_added, added files are omitted.
std::set<std::string> ground_truth(const IssueReport& issue, const TraceIndex& index,
                                   const CommitLog& log, TruthPolicy policy);

}  // namespace irbl
