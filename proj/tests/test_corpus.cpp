#include <doctest.h>

#include <cstdlib>
#include <functional>

#include "irbl/corpus.hpp"
#include "irbl/errors.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace irbl;

namespace {

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::InvariantViolation;  // sentinel: "did not throw"
}

}  // namespace

TEST_CASE("load_issues ingests well-formed jsonl") {
  fixtures::TempDir tmp("issues_ok");
  const auto path = tmp.write("issues.jsonl",
      R"({"id":"P-1","kind":"bug","summary":"s1","description":"d","created_date":"2020-01-01T00:00:00Z","resolved_date":"2020-01-02T00:00:00Z","links":["P-2"]})"
      "\n"
      R"({"id":"P-2","kind":"feature","summary":"s2","created_date":"2020-01-03T00:00:00Z"})"
      "\n"
      R"({"id":"P-3","kind":"bug","summary":"s3","created_date":1578096000})"
      "\n");
  const auto corpus = load_issues(path, IssueFormat::jsonl);
  CHECK(corpus.size() == 3);
  CHECK(corpus.bug_count() == 2);
  CHECK(corpus.at("P-1").linked_issue_ids.count("P-2") == 1);
  CHECK(corpus.at("P-1").resolved_date.has_value());
  CHECK_FALSE(corpus.at("P-2").resolved_date.has_value());
  CHECK(corpus.at("P-3").created_date == 1578096000);
}

TEST_CASE("load_issues rejects resolved-before-created with a diagnostic") {
  fixtures::TempDir tmp("issues_reject");
  const auto path = tmp.write("issues.jsonl",
      R"({"id":"P-1","kind":"bug","summary":"ok","created_date":"2020-01-05","resolved_date":"2020-01-06"})"
      "\n"
      R"({"id":"P-2","kind":"bug","summary":"bad","created_date":"2020-01-05","resolved_date":"2020-01-04"})"
      "\n");
  const auto corpus = load_issues(path, IssueFormat::jsonl);
  CHECK(corpus.size() == 1);
  REQUIRE(corpus.rejected_ids().size() == 1);
  CHECK(corpus.rejected_ids()[0] == "P-2");
  CHECK(corpus.rejection_diagnostic().find("P-2") != std::string::npos);
}

TEST_CASE("load_issues error taxonomy") {
  fixtures::TempDir tmp("issues_err");
  CHECK(code_of([&] {
    load_issues(tmp.write("a.jsonl", R"({"id":"P-1","kind":"bug","created_date":"2020-01-01"})"),
                IssueFormat::jsonl);
  }) == Errc::MissingField);
  CHECK(code_of([&] {
    load_issues(tmp.write("b.jsonl",
                          R"({"id":"P-1","kind":"bug","summary":"s","created_date":"not a date"})"),
                IssueFormat::jsonl);
  }) == Errc::MalformedTimestamp);
  const std::string dup =
      R"({"id":"P-1","kind":"bug","summary":"s","created_date":"2020-01-01"})";
  CHECK(code_of([&] {
    load_issues(tmp.write("c.jsonl", dup + "\n" + dup + "\n"), IssueFormat::jsonl);
  }) == Errc::DuplicateId);
  CHECK(code_of([&] { load_issues(tmp.path() / "missing.jsonl", IssueFormat::jsonl); }) ==
        Errc::UnreadableSource);
}

TEST_CASE("load_issues csv matches the jsonl loader") {
  const auto a = load_issues(fixtures::root() / "issues.jsonl", IssueFormat::jsonl);
  const auto b = load_issues(fixtures::root() / "issues.csv", IssueFormat::csv);
  REQUIRE(a.size() == b.size());
  for (const auto& issue : a.issues()) {
    const IssueReport& other = b.at(issue.id);
    CHECK(other.kind == issue.kind);
    CHECK(other.summary == issue.summary);
    CHECK(other.created_date == issue.created_date);
    CHECK(other.resolved_date == issue.resolved_date);
    CHECK(other.linked_issue_ids == issue.linked_issue_ids);
  }
}

TEST_CASE("bulk tracker export: 470 bug records load as 470 bugs") {
  fixtures::TempDir tmp("issues_bulk");
  std::string content;
  for (int i = 0; i < 470; ++i)
    content += R"({"id":"ZOOKEEPER-)" + std::to_string(i + 1) +
               R"(","kind":"bug","summary":"b","created_date":"2020-01-01"})" "\n";
  for (int i = 0; i < 471; ++i)
    content += R"({"id":"ZOOKEEPER-F)" + std::to_string(i + 1) +
               R"(","kind":"improvement","summary":"f","created_date":"2020-01-01"})" "\n";
  const auto corpus = load_issues(tmp.write("issues.jsonl", content), IssueFormat::jsonl);
  CHECK(corpus.size() == 941);
  CHECK(corpus.bug_count() == 470);
}

TEST_CASE("load_commits ingests jsonl and applies the extension filter") {
  fixtures::TempDir tmp("commits_ok");
  const auto path = tmp.write("commits.jsonl",
      R"({"hash":"c1","timestamp":"2020-01-01T00:00:00Z","message":"add","changes":[{"kind":"added","new":"A.java"},{"kind":"added","new":"README.md"}]})"
      "\n"
      R"({"hash":"c2","timestamp":"2020-01-02T00:00:00Z","message":"touch","changes":[{"kind":"modified","new":"A.java"}]})"
      "\n");
  const auto log = load_commits(path);
  CHECK(log.size() == 2);
  const CommitRecord* c1 = log.find("c1");
  REQUIRE(c1 != nullptr);
  REQUIRE(c1->changes.size() == 2);
  CHECK(c1->changes[0].is_source);       // A.java
  CHECK_FALSE(c1->changes[1].is_source); // README.md retained but flagged non-source
}

TEST_CASE("load_commits errors") {
  fixtures::TempDir tmp("commits_err");
  CHECK(code_of([&] { load_commits(tmp.path() / "nope.jsonl"); }) == Errc::UnreadableSource);
  CHECK(code_of([&] { load_commits(tmp.write("empty.jsonl", "\n")); }) == Errc::EmptyHistory);
  CHECK(code_of([&] {
    load_commits(tmp.write("bad.jsonl",
        R"({"hash":"c1","timestamp":"2020-01-01","message":"m","changes":[{"kind":"renamed","new":"B.java"}]})"));
  }) == Errc::UnreadableSource);
}

TEST_CASE("load_commits reads a git repository and detects renames") {
  if (std::system("git --version >/dev/null 2>&1") != 0) {
    MESSAGE("git unavailable; skipping repository ingestion test");
    return;
  }
  fixtures::TempDir tmp("gitrepo");
  const std::string repo = (tmp.path() / "repo").string();
  const std::string setup =
      "cd '" + repo + "' && git init -q && git config user.email t@t && git config user.name t "
      "&& git config commit.gpgsign false";
  std::filesystem::create_directories(repo);
  REQUIRE(std::system(setup.c_str()) == 0);
  auto git = [&](const std::string& date, const std::string& cmd) {
    const std::string full = "cd '" + repo + "' && export GIT_AUTHOR_DATE='" + date +
                             "' GIT_COMMITTER_DATE='" + date + "' && { " + cmd +
                             "; } >/dev/null 2>&1";
    REQUIRE(std::system(full.c_str()) == 0);
  };
  git("2020-01-01T10:00:00Z",
      "bash -c 'echo class A > A.java' && git add A.java && git commit -qm 'add A'");
  git("2020-01-02T10:00:00Z", "git mv A.java B.java && git commit -qm 'rename A to B'");
  git("2020-01-03T10:00:00Z",
      "bash -c 'echo more >> B.java' && git add B.java && git commit -qm 'edit B'");

  const auto log = load_commits(repo);
  REQUIRE(log.size() == 3);
  // Verified against the version-control tool's own name-status output.
  const auto& rename_commit = log.commits()[1];
  REQUIRE(rename_commit.changes.size() == 1);
  CHECK(rename_commit.changes[0].kind == ChangeKind::renamed);
  CHECK(*rename_commit.changes[0].old_path == "A.java");
  CHECK(*rename_commit.changes[0].new_path == "B.java");
  CHECK(log.commits()[2].changes[0].kind == ChangeKind::modified);
}

TEST_CASE("link_issues_commits matches whole tokens only") {
  fixtures::TempDir tmp("link");
  const auto issues = tmp.write("issues.jsonl",
      R"({"id":"HBASE-123","kind":"bug","summary":"s","created_date":"2020-01-01"})" "\n");
  const auto commits = tmp.write("commits.jsonl",
      R"({"hash":"c1","timestamp":"2020-01-01","message":"HBASE-123 correct off-by-one","changes":[{"kind":"modified","new":"A.java"}]})" "\n"
      R"({"hash":"c2","timestamp":"2020-01-02","message":"refactor module","changes":[{"kind":"modified","new":"A.java"}]})" "\n"
      R"({"hash":"c3","timestamp":"2020-01-03","message":"HBASE-1234 something else","changes":[{"kind":"modified","new":"A.java"}]})" "\n");
  const auto corpus = load_issues(issues, IssueFormat::jsonl);
  const auto log = load_commits(commits);
  const auto index = link_issues_commits(corpus, log);

  const auto* linked = index.commits_for("HBASE-123");
  REQUIRE(linked != nullptr);
  CHECK(*linked == std::set<std::string>{"c1"});  // c3 must NOT match (whole token)
  CHECK(index.commit_to_issues.count("c2") == 0);
}

TEST_CASE("explicit side-file links are honored") {
  const auto& data = fixtures::demo();
  // links.csv ties DEMO-12 to c23ffffff whose message carries no issue id.
  const auto* linked = data.index.commits_for("DEMO-12");
  REQUIRE(linked != nullptr);
  CHECK(linked->count("c23ffffff") == 1);
}

TEST_CASE("trace index is inverse consistent") {
  const auto& index = fixtures::demo().index;
  for (const auto& [issue, commits] : index.issue_to_commits) {
    for (const auto& hash : commits) CHECK(index.commit_to_issues.at(hash).count(issue) == 1);
  }
  for (const auto& [hash, issues] : index.commit_to_issues) {
    for (const auto& issue : issues) CHECK(index.issue_to_commits.at(issue).count(hash) == 1);
  }
}

TEST_CASE("snapshot replay semantics") {
  fixtures::TempDir tmp("snap");
  const auto commits = tmp.write("commits.jsonl",
      R"({"hash":"c1","timestamp":100,"message":"add","changes":[{"kind":"added","new":"f1.java"}]})" "\n"
      R"({"hash":"c2","timestamp":200,"message":"del","changes":[{"kind":"deleted","old":"f1.java"}]})" "\n"
      R"({"hash":"c3","timestamp":300,"message":"ren","changes":[{"kind":"added","new":"A.java"}]})" "\n"
      R"({"hash":"c4","timestamp":400,"message":"ren","changes":[{"kind":"renamed","old":"A.java","new":"B.java"}]})" "\n");
  const auto log = load_commits(commits);

  CHECK(snapshot_files(log, 101).files == std::set<std::string>{"f1.java"});
  CHECK(snapshot_files(log, 200).files == std::set<std::string>{"f1.java"});  // just prior
  CHECK(snapshot_files(log, 201).files == std::set<std::string>{});
  CHECK(snapshot_files(log, 401).files == std::set<std::string>{"B.java"});
  CHECK(snapshot_files(log, 100).files.empty());
}

TEST_CASE("fixture snapshots equal the brute-force replay oracle") {
  const auto& data = fixtures::demo();
  const std::set<std::string> exts = {".java", ".py"};
  for (std::int64_t as_of : {1577836800ll, 1577836800ll + 5 * 86400, 1577836800ll + 13 * 86400,
                             1577836800ll + 19 * 86400, 1577836800ll + 100 * 86400,
                             1577836800ll + 191 * 86400, 1577836800ll + 400 * 86400}) {
    CAPTURE(as_of);
    CHECK(snapshot_files(data.log, as_of).files ==
          oracles::snapshot_bruteforce(data.log, as_of, exts));
  }
}

TEST_CASE("snapshot monotone consistency across consecutive commits") {
  const auto& log = fixtures::demo().log;
  for (const auto& commit : log.commits()) {
    auto before = snapshot_files(log, commit.timestamp).files;
    // apply this commit's changes by hand
    for (const auto& ch : commit.changes) {
      switch (ch.kind) {
        case ChangeKind::added:
        case ChangeKind::modified:
          if (ch.is_source) before.insert(*ch.new_path);
          break;
        case ChangeKind::renamed:
          before.erase(*ch.old_path);
          if (ch.is_source) before.insert(*ch.new_path);
          break;
        case ChangeKind::deleted:
          before.erase(*ch.old_path);
          break;
      }
    }
    CHECK(before == snapshot_files(log, commit.timestamp + 1).files);
  }
}

TEST_CASE("ground truth policies") {
  fixtures::TempDir tmp("truth");
  const auto issues = tmp.write("issues.jsonl",
      R"({"id":"P-1","kind":"bug","summary":"s","created_date":100,"resolved_date":400})" "\n");
  const auto commits = tmp.write("commits.jsonl",
      R"({"hash":"c1","timestamp":200,"message":"P-1 fix","changes":[)"
      R"({"kind":"modified","new":"A.java"},{"kind":"added","new":"C.java"},)"
      R"({"kind":"renamed","old":"Old.java","new":"New.java"},)"
      R"({"kind":"deleted","old":"Gone.java"},{"kind":"modified","new":"notes.txt"}]})" "\n");
  const auto corpus = load_issues(issues, IssueFormat::jsonl);
  const auto log = load_commits(commits);
  const auto index = link_issues_commits(corpus, log);

  const auto all = ground_truth(corpus.at("P-1"), index, log, TruthPolicy::all_changed);
  CHECK(all == std::set<std::string>{"A.java", "C.java", "New.java", "Gone.java"});

  const auto no_added = ground_truth(corpus.at("P-1"), index, log, TruthPolicy::exclude_added);
  CHECK(no_added == std::set<std::string>{"A.java", "New.java", "Gone.java"});

  const IssueReport orphan{"P-9", IssueKind::bug, "s", "", 100, std::nullopt, {}};
  CHECK(code_of([&] { ground_truth(orphan, index, log, TruthPolicy::all_changed); }) ==
        Errc::NoLinkedCommits);
}

TEST_CASE("ground truth stays within snapshot plus fix-commit changes") {
  const auto& data = fixtures::demo();
  for (const auto& issue : data.corpus.issues()) {
    if (!data.index.commits_for(issue.id)) continue;
    const auto truth = ground_truth(issue, data.index, data.log, TruthPolicy::all_changed);
    const auto snap = snapshot_files(data.log, issue.created_date);
    std::set<std::string> changed;
    for (const auto& hash : *data.index.commits_for(issue.id)) {
      const auto* commit = data.log.find(hash);
      if (!commit) continue;
      for (const auto& ch : commit->changes) {
        if (!ch.is_source) continue;
        if (ch.new_path) changed.insert(*ch.new_path);
        if (ch.old_path) changed.insert(*ch.old_path);
      }
    }
    for (const auto& path : truth) {
      CAPTURE(issue.id);
      CAPTURE(path);
      CHECK((snap.contains(path) || changed.count(path) > 0));
    }
    // Without added files the truth lies inside the snapshot, except for the
    // new names introduced by renaming fix commits (those names, like added
    // files, did not exist when the bug was filed).
    std::set<std::string> renamed_new;
    for (const auto& hash : *data.index.commits_for(issue.id)) {
      const auto* commit = data.log.find(hash);
      if (!commit) continue;
      for (const auto& ch : commit->changes)
        if (ch.is_source && ch.kind == ChangeKind::renamed) renamed_new.insert(*ch.new_path);
    }
    for (const auto& path : ground_truth(issue, data.index, data.log, TruthPolicy::exclude_added)) {
      CAPTURE(issue.id);
      CAPTURE(path);
      CHECK((snap.contains(path) || renamed_new.count(path) > 0));
    }
  }
}
