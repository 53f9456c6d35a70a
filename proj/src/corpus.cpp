#include "irbl/corpus.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "irbl/csv.hpp"
#include "irbl/errors.hpp"
#include "irbl/util.hpp"

namespace irbl {

using nlohmann::json;

void IssueCorpus::add(IssueReport issue) {
  if (by_id_.count(issue.id))
    throw Error(Errc::DuplicateId, "issue id " + issue.id + " appears more than once");
  by_id_.emplace(issue.id, issues_.size());
  issues_.push_back(std::move(issue));
}

const IssueReport* IssueCorpus::find(const std::string& id) const {
  auto it = by_id_.find(id);
  return it == by_id_.end() ? nullptr : &issues_[it->second];
}

const IssueReport& IssueCorpus::at(const std::string& id) const {
  const IssueReport* p = find(id);
  if (!p) throw Error(Errc::InvariantViolation, "unknown issue id: " + id);
  return *p;
}

std::size_t IssueCorpus::bug_count() const {
  return static_cast<std::size_t>(std::count_if(
      issues_.begin(), issues_.end(),
      [](const IssueReport& i) { return i.kind == IssueKind::bug; }));
}

std::string IssueCorpus::rejection_diagnostic() const {
  if (rejected_ids_.empty()) return {};
  std::string msg = "rejected records with resolved_date before created_date:";
  for (const auto& id : rejected_ids_) msg += " " + id;
  return msg;
}

CommitLog::CommitLog(std::vector<CommitRecord> commits) : commits_(std::move(commits)) {
  std::sort(commits_.begin(), commits_.end(), [](const CommitRecord& a, const CommitRecord& b) {
    return a.timestamp != b.timestamp ? a.timestamp < b.timestamp : a.hash < b.hash;
  });
  for (size_t i = 0; i < commits_.size(); ++i) {
    if (!by_hash_.emplace(commits_[i].hash, i).second)
      throw Error(Errc::DuplicateId, "commit hash " + commits_[i].hash + " appears more than once");
  }
}

const CommitRecord* CommitLog::find(const std::string& hash) const {
  auto it = by_hash_.find(hash);
  return it == by_hash_.end() ? nullptr : &commits_[it->second];
}

namespace {

std::int64_t parse_date_value(const json& v, const std::string& context) {
  if (v.is_number_integer()) return v.get<std::int64_t>();
  if (v.is_number_float()) return static_cast<std::int64_t>(v.get<double>());
  if (v.is_string()) return parse_iso8601(v.get<std::string>());
  throw Error(Errc::MalformedTimestamp, context + ": expected ISO-8601 string or epoch seconds");
}

IssueKind parse_kind(std::string_view raw) {
  // The corpus distinguishes bugs from everything else; feature requests,
  // improvements and tasks all land on the non-bug side.
  return to_lower(raw) == "bug" ? IssueKind::bug : IssueKind::feature;
}

IssueReport issue_from_json(const json& rec, const std::string& where) {
  for (const char* field : {"id", "kind", "summary", "created_date"}) {
    if (!rec.contains(field) || rec.at(field).is_null())
      throw Error(Errc::MissingField, where + ": missing " + field);
  }
  IssueReport issue;
  issue.id = rec.at("id").get<std::string>();
  issue.kind = parse_kind(rec.at("kind").get<std::string>());
  issue.summary = rec.at("summary").get<std::string>();
  if (rec.contains("description") && rec.at("description").is_string())
    issue.description = rec.at("description").get<std::string>();
  issue.created_date = parse_date_value(rec.at("created_date"), where + " created_date");
  if (rec.contains("resolved_date") && !rec.at("resolved_date").is_null()) {
    const auto& v = rec.at("resolved_date");
    if (!(v.is_string() && v.get<std::string>().empty()))
      issue.resolved_date = parse_date_value(v, where + " resolved_date");
  }
  if (rec.contains("links") && rec.at("links").is_array()) {
    for (const auto& l : rec.at("links")) issue.linked_issue_ids.insert(l.get<std::string>());
  }
  return issue;
}

IssueCorpus load_issues_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::UnreadableSource, "cannot open " + path.string());
  IssueCorpus corpus;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = path.filename().string() + ":" + std::to_string(lineno);
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::exception& e) {
      throw Error(Errc::UnreadableSource, where + ": " + e.what());
    }
    IssueReport issue = issue_from_json(rec, where);
    if (issue.resolved_date && *issue.resolved_date < issue.created_date) {
      corpus.note_rejected(issue.id);
      continue;
    }
    corpus.add(std::move(issue));
  }
  return corpus;
}

IssueCorpus load_issues_csv(const std::filesystem::path& path) {
  auto rows = read_csv_file(path);
  if (rows.empty()) throw Error(Errc::UnreadableSource, path.string() + " is empty");
  std::map<std::string, size_t> col;
  for (size_t i = 0; i < rows[0].size(); ++i) col[to_lower(rows[0][i])] = i;
  for (const char* field : {"id", "kind", "summary", "created_date"}) {
    if (!col.count(field))
      throw Error(Errc::MissingField, path.string() + ": header lacks column " + field);
  }
  auto cell = [&](const std::vector<std::string>& row, const char* name) -> std::string {
    auto it = col.find(name);
    if (it == col.end() || it->second >= row.size()) return {};
    return row[it->second];
  };
  IssueCorpus corpus;
  for (size_t r = 1; r < rows.size(); ++r) {
    const std::string where = path.filename().string() + ":" + std::to_string(r + 1);
    IssueReport issue;
    issue.id = cell(rows[r], "id");
    if (issue.id.empty()) throw Error(Errc::MissingField, where + ": missing id");
    std::string kind = cell(rows[r], "kind");
    if (kind.empty()) throw Error(Errc::MissingField, where + ": missing kind");
    issue.kind = parse_kind(kind);
    issue.summary = cell(rows[r], "summary");
    issue.description = cell(rows[r], "description");
    std::string created = cell(rows[r], "created_date");
    if (created.empty()) throw Error(Errc::MissingField, where + ": missing created_date");
    issue.created_date = parse_iso8601(created);
    std::string resolved = cell(rows[r], "resolved_date");
    if (!resolved.empty()) issue.resolved_date = parse_iso8601(resolved);
    for (const auto& l : split(cell(rows[r], "links"), ';'))
      if (!l.empty()) issue.linked_issue_ids.insert(l);
    if (issue.resolved_date && *issue.resolved_date < issue.created_date) {
      corpus.note_rejected(issue.id);
      continue;
    }
    corpus.add(std::move(issue));
  }
  return corpus;
}

ChangeKind parse_change_kind(std::string_view raw) {
  std::string k = to_lower(raw);
  if (k == "added" || k == "a") return ChangeKind::added;
  if (k == "modified" || k == "m") return ChangeKind::modified;
  if (k == "deleted" || k == "d") return ChangeKind::deleted;
  if (k == "renamed" || k == "r") return ChangeKind::renamed;
  throw Error(Errc::UnreadableSource, "unknown change kind: " + std::string(raw));
}

bool has_source_extension(const std::string& path, const CorpusOptions& opts) {
  return opts.source_extensions.count(path_extension(path)) > 0;
}

void finalize_change(FileChange& ch, const CorpusOptions& opts, const std::string& where) {
  switch (ch.kind) {
    case ChangeKind::added:
      if (!ch.new_path || ch.old_path)
        throw Error(Errc::UnreadableSource, where + ": added change must carry only a new path");
      break;
    case ChangeKind::deleted:
      if (!ch.old_path && ch.new_path) std::swap(ch.old_path, ch.new_path);
      if (!ch.old_path || ch.new_path)
        throw Error(Errc::UnreadableSource, where + ": deleted change must carry only an old path");
      break;
    case ChangeKind::modified:
      if (!ch.new_path && ch.old_path) ch.new_path = ch.old_path;
      if (!ch.old_path && ch.new_path) ch.old_path = ch.new_path;
      if (!ch.new_path || *ch.old_path != *ch.new_path)
        throw Error(Errc::UnreadableSource, where + ": modified change must keep the same path");
      break;
    case ChangeKind::renamed:
      if (!ch.old_path || !ch.new_path || *ch.old_path == *ch.new_path)
        throw Error(Errc::UnreadableSource, where + ": renamed change needs two distinct paths");
      break;
  }
  const std::string& probe = ch.kind == ChangeKind::deleted ? *ch.old_path : *ch.new_path;
  ch.is_source = has_source_extension(probe, opts);
}

CommitLog load_commits_jsonl(const std::filesystem::path& path, const CorpusOptions& opts) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::UnreadableSource, "cannot open " + path.string());
  std::vector<CommitRecord> commits;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = path.filename().string() + ":" + std::to_string(lineno);
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::exception& e) {
      throw Error(Errc::UnreadableSource, where + ": " + e.what());
    }
    for (const char* field : {"hash", "timestamp", "message"}) {
      if (!rec.contains(field))
        throw Error(Errc::UnreadableSource, where + ": missing " + field);
    }
    CommitRecord c;
    c.hash = rec.at("hash").get<std::string>();
    c.timestamp = parse_date_value(rec.at("timestamp"), where + " timestamp");
    c.message = rec.at("message").get<std::string>();
    if (rec.contains("changes")) {
      for (const auto& jc : rec.at("changes")) {
        FileChange ch;
        if (jc.contains("old") && jc.at("old").is_string()) ch.old_path = jc.at("old").get<std::string>();
        if (jc.contains("new") && jc.at("new").is_string()) ch.new_path = jc.at("new").get<std::string>();
        ch.kind = parse_change_kind(jc.value("kind", "modified"));
        finalize_change(ch, opts, where);
        c.changes.push_back(std::move(ch));
      }
    }
    commits.push_back(std::move(c));
  }
  if (commits.empty()) throw Error(Errc::EmptyHistory, path.string() + " contains no commits");
  return CommitLog(std::move(commits));
}

std::string run_command(const std::string& cmd) {
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) throw Error(Errc::UnreadableSource, "cannot run: " + cmd);
  std::array<char, 4096> buf;
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  if (pclose(pipe) != 0) throw Error(Errc::UnreadableSource, "command failed: " + cmd);
  return out;
}

// Record framing: \x02 hash \x01 epoch \x01 raw message \x03 name-status lines.
constexpr char kRecStart = '\x02';
constexpr char kMsgEnd = '\x03';

CommitLog load_commits_git(const std::filesystem::path& repo, const CorpusOptions& opts) {
  const std::string cmd = "git -C '" + repo.string() +
                          "' log -M --reverse --pretty=format:'%x02%H%x01%ct%x01%B%x03' "
                          "--name-status 2>/dev/null";
  const std::string out = run_command(cmd);
  std::vector<CommitRecord> commits;
  size_t pos = 0;
  while (true) {
    size_t start = out.find(kRecStart, pos);
    if (start == std::string::npos) break;
    size_t end = out.find(kRecStart, start + 1);
    std::string record = out.substr(start + 1, (end == std::string::npos ? out.size() : end) - start - 1);
    pos = end == std::string::npos ? out.size() : end;

    size_t msg_end = record.find(kMsgEnd);
    if (msg_end == std::string::npos)
      throw Error(Errc::UnreadableSource, "unparseable git log record");
    auto header = split(record.substr(0, msg_end), '\x01');
    if (header.size() != 3)
      throw Error(Errc::UnreadableSource, "unparseable git log header");
    CommitRecord c;
    c.hash = header[0];
    c.timestamp = std::stoll(header[1]);
    c.message = header[2];
    while (!c.message.empty() && c.message.back() == '\n') c.message.pop_back();

    std::istringstream lines(record.substr(msg_end + 1));
    std::string line;
    while (std::getline(lines, line)) {
      if (line.empty()) continue;
      auto fields = split(line, '\t');
      if (fields.empty() || fields[0].empty()) continue;
      const char status = fields[0][0];
      FileChange ch;
      if (status == 'A' && fields.size() >= 2) {
        ch.kind = ChangeKind::added;
        ch.new_path = fields[1];
      } else if (status == 'M' && fields.size() >= 2) {
        ch.kind = ChangeKind::modified;
        ch.old_path = ch.new_path = fields[1];
      } else if (status == 'D' && fields.size() >= 2) {
        ch.kind = ChangeKind::deleted;
        ch.old_path = fields[1];
      } else if ((status == 'R' || status == 'C') && fields.size() >= 3) {
        if (status == 'C') {
          ch.kind = ChangeKind::added;
          ch.new_path = fields[2];
        } else {
          ch.kind = ChangeKind::renamed;
          ch.old_path = fields[1];
          ch.new_path = fields[2];
        }
      } else if (status == 'T' && fields.size() >= 2) {
        ch.kind = ChangeKind::modified;
        ch.old_path = ch.new_path = fields[1];
      } else {
        continue;
      }
      finalize_change(ch, opts, c.hash);
      c.changes.push_back(std::move(ch));
    }
    commits.push_back(std::move(c));
  }
  if (commits.empty()) throw Error(Errc::EmptyHistory, repo.string() + " has no commits");
  return CommitLog(std::move(commits));
}

}  // namespace

IssueCorpus load_issues(const std::filesystem::path& path, IssueFormat format) {
  if (!std::filesystem::exists(path))
    throw Error(Errc::UnreadableSource, path.string() + " does not exist");
  return format == IssueFormat::jsonl ? load_issues_jsonl(path) : load_issues_csv(path);
}

CommitLog load_commits(const std::filesystem::path& source, const CorpusOptions& opts) {
  if (std::filesystem::is_directory(source)) return load_commits_git(source, opts);
  if (!std::filesystem::exists(source))
    throw Error(Errc::UnreadableSource, source.string() + " does not exist");
  return load_commits_jsonl(source, opts);
}

std::vector<std::pair<std::string, std::string>> load_links_csv(
    const std::filesystem::path& path) {
  std::vector<std::pair<std::string, std::string>> links;
  for (const auto& row : read_csv_file(path)) {
    if (row.size() < 2) continue;
    if (to_lower(row[0]) == "issue_id") continue;  // header
    links.emplace_back(row[0], row[1]);
  }
  return links;
}

namespace {

// Whole tokens over [A-Za-z0-9_-] runs; "HBASE-1234" never matches "HBASE-123".
std::vector<std::string> id_tokens(const std::string& message) {
  std::vector<std::string> tokens;
  auto is_id_char = [](char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
           c == '_' || c == '-';
  };
  size_t i = 0;
  while (i < message.size()) {
    if (!is_id_char(message[i])) {
      ++i;
      continue;
    }
    size_t start = i;
    while (i < message.size() && is_id_char(message[i])) ++i;
    tokens.push_back(message.substr(start, i - start));
  }
  return tokens;
}

}  // namespace

TraceIndex link_issues_commits(
    const IssueCorpus& corpus, const CommitLog& log,
    const std::vector<std::pair<std::string, std::string>>& explicit_links) {
  TraceIndex index;
  for (const auto& [issue_id, commit_hash] : explicit_links) {
    if (corpus.find(issue_id)) index.add_link(issue_id, commit_hash);
  }
  for (const auto& commit : log.commits()) {
    for (const auto& tok : id_tokens(commit.message)) {
      if (corpus.find(tok)) index.add_link(tok, commit.hash);
    }
  }
  return index;
}

FileSnapshot snapshot_files(const CommitLog& log, std::int64_t as_of) {
  FileSnapshot snap;
  snap.as_of = as_of;
  for (const auto& commit : log.commits()) {
    if (commit.timestamp >= as_of) break;  // commits are chronologically sorted
    for (const auto& ch : commit.changes) {
      switch (ch.kind) {
        case ChangeKind::added:
        case ChangeKind::modified:
          if (ch.is_source) snap.files.insert(*ch.new_path);
          break;
        case ChangeKind::renamed:
          snap.files.erase(*ch.old_path);
          if (ch.is_source) snap.files.insert(*ch.new_path);
          break;
        case ChangeKind::deleted:
          snap.files.erase(*ch.old_path);
          break;
      }
    }
  }
  return snap;
}

std::set<std::string> ground_truth(const IssueReport& issue, const TraceIndex& index,
                                   const CommitLog& log, TruthPolicy policy) {
  const auto* hashes = index.commits_for(issue.id);
  if (!hashes || hashes->empty())
    throw Error(Errc::NoLinkedCommits, issue.id + " has no linked commits");
  std::set<std::string> truth;
  for (const auto& hash : *hashes) {
    const CommitRecord* commit = log.find(hash);
    if (!commit) continue;
    for (const auto& ch : commit->changes) {
      if (!ch.is_source) continue;
      switch (ch.kind) {
        case ChangeKind::added:
          if (policy == TruthPolicy::all_changed) truth.insert(*ch.new_path);
          break;
        case ChangeKind::deleted:
          truth.insert(*ch.old_path);
          break;
        case ChangeKind::modified:
        case ChangeKind::renamed:
          truth.insert(*ch.new_path);
          break;
      }
    }
  }
  return truth;
}

}  // namespace irbl
