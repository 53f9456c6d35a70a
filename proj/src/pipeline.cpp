#include "irbl/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <limits>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "irbl/csv.hpp"
#include "irbl/errors.hpp"
#include "irbl/util.hpp"

namespace irbl {

using nlohmann::json;

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_metric(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string derive_project(const IssueCorpus& corpus) {
  std::map<std::string, int> prefix_counts;
  for (const auto& issue : corpus.issues()) {
    auto dash = issue.id.find('-');
    if (dash != std::string::npos && dash > 0) ++prefix_counts[issue.id.substr(0, dash)];
  }
  std::string best = "PROJECT";
  int best_count = 0;
  for (const auto& [prefix, count] : prefix_counts) {
    if (count > best_count) {
      best = prefix;
      best_count = count;
    }
  }
  return best;
}

bool parse_bool(const std::string& v) {
  std::string s = to_lower(v);
  if (s == "1" || s == "true" || s == "yes" || s == "on") return true;
  if (s == "0" || s == "false" || s == "no" || s == "off") return false;
  throw Error(Errc::ConfigError, "expected a boolean, got '" + v + "'");
}

double parse_double(const std::string& v) {
  try {
    size_t pos = 0;
    double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw Error(Errc::ConfigError, "expected a number, got '" + v + "'");
  }
}

std::int64_t parse_int(const std::string& v) {
  try {
    size_t pos = 0;
    long long i = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return i;
  } catch (const std::exception&) {
    throw Error(Errc::ConfigError, "expected an integer, got '" + v + "'");
  }
}

}  // namespace

void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "issues") cfg.issues = value;
  else if (key == "commits") cfg.commits = value;
  else if (key == "links") cfg.links = value;
  else if (key == "sources") cfg.sources = value;
  else if (key == "workdir") cfg.workdir = value;
  else if (key == "issues_format") {
    if (value == "jsonl") cfg.issues_format = IssueFormat::jsonl;
    else if (value == "csv") cfg.issues_format = IssueFormat::csv;
    else throw Error(Errc::ConfigError, "issues_format must be jsonl or csv");
  } else if (key == "project") cfg.project = value;
  else if (key == "extensions") {
    cfg.extensions.clear();
    for (auto& e : split(value, ',')) {
      if (e.empty()) continue;
      cfg.extensions.insert(e[0] == '.' ? to_lower(e) : "." + to_lower(e));
    }
    if (cfg.extensions.empty()) throw Error(Errc::ConfigError, "extensions must not be empty");
  } else if (key == "language") cfg.language = value;
  else if (key == "cutoff") {
    if (value == "relaxed") cfg.cutoff = CutoffMode::relaxed;
    else if (value == "strict") cfg.cutoff = CutoffMode::strict;
    else throw Error(Errc::ConfigError, "cutoff must be relaxed or strict");
  } else if (key == "truth_policy") {
    if (value == "all" || value == "all_changed") cfg.truth_policy = TruthPolicy::all_changed;
    else if (value == "exclude-added" || value == "exclude_added")
      cfg.truth_policy = TruthPolicy::exclude_added;
    else throw Error(Errc::ConfigError, "truth_policy must be all or exclude-added");
  } else if (key == "bugcache.k") cfg.bugcache.window_days = static_cast<int>(parse_int(value));
  else if (key == "bugcache.cutoff") {
    if (value == "created" || value == "created_date")
      cfg.bugcache.cutoff = BugCacheCutoff::created_date;
    else if (value == "resolved" || value == "resolved_date")
      cfg.bugcache.cutoff = BugCacheCutoff::resolved_date;
    else throw Error(Errc::ConfigError, "bugcache.cutoff must be created or resolved");
  } else if (key == "bugcache.fix_regex") cfg.bugcache.fix_regex = value;
  else if (key == "allow_leakage") cfg.bugcache.allow_leakage = parse_bool(value);
  else if (key == "bm25.k1") cfg.bm25.k1 = parse_double(value);
  else if (key == "bm25.b") cfg.bm25.b = parse_double(value);
  else if (key == "snapshot_granularity") {
    if (value == "per_bug") cfg.snapshot_granularity = SnapshotGranularity::per_bug;
    else if (value == "per_window") cfg.snapshot_granularity = SnapshotGranularity::per_window;
    else throw Error(Errc::ConfigError, "snapshot_granularity must be per_bug or per_window");
  } else if (key == "composer" || key == "composers") {
    cfg.composers.clear();
    for (auto& name : split(value, ',')) {
      if (name.empty()) continue;
      FusionSpec spec;
      spec.kind = parse_fusion_kind(name);
      cfg.composers.push_back(spec);
    }
    if (cfg.composers.empty()) throw Error(Errc::ConfigError, "composer list must not be empty");
  } else if (key == "fixed.a") {
    for (auto& c : cfg.composers) c.a = parse_double(value);
  } else if (key == "fixed.b") {
    for (auto& c : cfg.composers) c.b = parse_double(value);
  } else if (key == "corrb.top_n") {
    for (auto& c : cfg.composers) c.top_n = static_cast<int>(parse_int(value));
  } else if (key == "lr.learning_rate") cfg.hyper.lr_learning_rate = parse_double(value);
  else if (key == "lr.epochs") cfg.hyper.lr_epochs = static_cast<int>(parse_int(value));
  else if (key == "tree.max_depth") cfg.hyper.tree_max_depth = static_cast<int>(parse_int(value));
  else if (key == "tree.min_leaf") cfg.hyper.tree_min_leaf = static_cast<int>(parse_int(value));
  else if (key == "rf.trees") cfg.hyper.rf_trees = static_cast<int>(parse_int(value));
  else if (key == "rf.features_per_split")
    cfg.hyper.rf_features_per_split = static_cast<int>(parse_int(value));
  else if (key == "mlp.hidden") cfg.hyper.mlp_hidden = static_cast<int>(parse_int(value));
  else if (key == "mlp.epochs") cfg.hyper.mlp_epochs = static_cast<int>(parse_int(value));
  else if (key == "mlp.learning_rate") cfg.hyper.mlp_learning_rate = parse_double(value);
  else if (key == "split_ratio") cfg.split_ratio = parse_double(value);
  else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_int(value));
  else if (key == "threads") cfg.threads = static_cast<int>(parse_int(value));
  else if (key == "dump_vocab") cfg.dump_vocab = parse_bool(value);
  else if (key == "max_bug_files") cfg.limits.max_bug_files = static_cast<int>(parse_int(value));
  else if (key == "max_feature_files")
    cfg.limits.max_feature_files = static_cast<int>(parse_int(value));
  else throw Error(Errc::ConfigError, "unknown config key: " + key);
}

RunConfig load_run_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error(Errc::ConfigError, "cannot open config " + file.string());
  RunConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(Errc::ConfigError, file.string() + ":" + std::to_string(lineno) +
                                         ": expected key=value");
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t");
      const auto b = s.find_last_not_of(" \t");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    apply_config_entry(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

namespace {

void validate(const RunConfig& cfg) {
  if (cfg.issues.empty()) throw Error(Errc::ConfigError, "issues path is required");
  if (cfg.commits.empty()) throw Error(Errc::ConfigError, "commits path is required");
  if (cfg.bugcache.cutoff == BugCacheCutoff::resolved_date && !cfg.bugcache.allow_leakage)
    throw Error(Errc::LeakageGuard,
                "bugcache.cutoff=resolved reads commits made after the query bug's creation; "
                "pass --allow-leakage to reproduce that leaky setting deliberately");
  if (cfg.split_ratio <= 0.0 || cfg.split_ratio >= 1.0)
    throw Error(Errc::ConfigError, "split_ratio must be in (0,1)");
  if (cfg.composers.empty()) throw Error(Errc::ConfigError, "at least one composer is required");
  for (const auto& c : cfg.composers) {
    if (c.kind == FusionKind::fixed_weight && (c.a < 0.0 || c.a > 1.0 || c.b < 0.0 || c.b > 1.0))
      throw Error(Errc::ConfigError, "fixed_weight needs a, b in [0,1]");
  }
}

CorpusOptions corpus_options(const RunConfig& cfg) {
  CorpusOptions opts;
  opts.source_extensions = cfg.extensions;
  return opts;
}

}  // namespace

LoadedData load_inputs(const RunConfig& cfg) {
  LoadedData data;
  data.corpus = load_issues(cfg.issues, cfg.issues_format);
  data.log = load_commits(cfg.commits, corpus_options(cfg));
  std::vector<std::pair<std::string, std::string>> links;
  if (!cfg.links.empty()) links = load_links_csv(cfg.links);
  data.index = link_issues_commits(data.corpus, data.log, links);
  data.project = cfg.project.empty() ? derive_project(data.corpus) : cfg.project;
  return data;
}

namespace {

// Scores and feature rows for one evaluated bug.
struct BugArtifacts {
  std::string bug_id;
  ScoreTable trace;
  ScoreTable history;
  ScoreTable structure;
  std::vector<FeatureRow> rows;  // raw (unnormalized) features
};

Language language_for(const std::string& path, const RunConfig& cfg) {
  const std::string ext = path_extension(path);
  if (ext == ".py") return Language::python;
  if (ext == ".java") return Language::java;
  return parse_language(cfg.language);
}

// Reads and lexes every file of the union snapshot from the configured
// checkout; files missing there get empty fields.
std::map<std::string, CodeFields> load_code_fields(const RunConfig& cfg,
                                                   const std::set<std::string>& files) {
  std::map<std::string, CodeFields> out;
  for (const auto& rel : files) {
    CodeFields fields;
    const std::filesystem::path full = cfg.sources / rel;
    if (std::filesystem::exists(full))
      fields = extract_fields(read_file(full), language_for(rel, cfg));
    out.emplace(rel, std::move(fields));
  }
  return out;
}

struct ScoreContext {
  const RunConfig& cfg;
  const LoadedData& data;
  std::optional<ScoreComponent> only;
  std::vector<std::string> train_bugs;
  std::vector<std::string> test_bugs;
  ArtifactCatalog catalog;                          // fix sets + tokens, built once
  std::map<std::string, CodeFields> code_fields;    // union snapshot lexed once
  std::optional<StructuredIndex> window_index;      // per_window granularity
};

ScoreTable filtered_to_snapshot(ScoreTable table, const FileSnapshot& snapshot) {
  for (auto it = table.scores.begin(); it != table.scores.end();) {
    if (!snapshot.contains(it->first)) it = table.scores.erase(it);
    else ++it;
  }
  return table;
}

BugArtifacts score_one_bug(const ScoreContext& ctx, const std::string& bug_id) {
  const RunConfig& cfg = ctx.cfg;
  const IssueReport& query = ctx.data.corpus.at(bug_id);
  const FileSnapshot snapshot = snapshot_files(ctx.data.log, query.created_date);

  BugArtifacts art;
  art.bug_id = bug_id;
  const auto wants = [&ctx](ScoreComponent c) { return !ctx.only || *ctx.only == c; };

  // Similar-reports component.
  if (wants(ScoreComponent::trace)) {
    const auto artifacts = select_artifacts(query, ctx.catalog, cfg.cutoff, cfg.limits);
    if (!artifacts.empty()) {
      const VectorSpace space = build_query_space(query, ctx.catalog, artifacts);
      const TraceGraph graph =
          build_trace_graph(query, artifacts, space, ctx.data.corpus, ctx.catalog, snapshot);
      art.trace = trace_score(graph);
    }
  }
  art.trace.bug_id = bug_id;

  // Version-history component.
  if (wants(ScoreComponent::history)) {
    const auto fix_commits = find_fix_commits(ctx.data.log, ctx.data.corpus, query, cfg.bugcache);
    art.history = bugcache_score(fix_commits, query, cfg.bugcache, snapshot);
  }
  art.history.bug_id = bug_id;

  // Code-structure component.
  if (wants(ScoreComponent::structure) && !cfg.sources.empty()) {
    if (cfg.snapshot_granularity == SnapshotGranularity::per_window) {
      if (ctx.window_index)
        art.structure = filtered_to_snapshot(
            structure_score(query, *ctx.window_index, cfg.bm25), snapshot);
    } else {
      std::map<std::string, CodeFields> subset;
      for (const auto& path : snapshot.files) {
        auto it = ctx.code_fields.find(path);
        if (it != ctx.code_fields.end()) subset.emplace(path, it->second);
      }
      if (!subset.empty()) {
        const StructuredIndex index = StructuredIndex::build(subset);
        art.structure = structure_score(query, index, cfg.bm25);
      }
    }
  }
  art.structure.bug_id = bug_id;

  if (!ctx.only) {
    const std::set<std::string> truth =
        ground_truth(query, ctx.data.index, ctx.data.log, cfg.truth_policy);
    art.rows = assemble_features(snapshot, art.trace, art.history, art.structure, truth);
  }
  return art;
}

std::vector<BugArtifacts> score_all_bugs(const ScoreContext& ctx) {
  std::vector<std::string> bugs = ctx.train_bugs;
  bugs.insert(bugs.end(), ctx.test_bugs.begin(), ctx.test_bugs.end());
  std::sort(bugs.begin(), bugs.end());

  std::vector<BugArtifacts> results(bugs.size());
  std::atomic<size_t> next{0};
  std::mutex err_mutex;
  std::exception_ptr first_error;

  int n_threads = ctx.cfg.threads > 0 ? ctx.cfg.threads
                                      : static_cast<int>(std::thread::hardware_concurrency());
  n_threads = std::clamp(n_threads, 1, 16);
  n_threads = std::min<int>(n_threads, static_cast<int>(bugs.size()) > 0
                                           ? static_cast<int>(bugs.size())
                                           : 1);

  auto worker = [&] {
    while (true) {
      const size_t i = next.fetch_add(1);
      if (i >= bugs.size()) return;
      try {
        results[i] = score_one_bug(ctx, bugs[i]);
      } catch (...) {
        std::lock_guard lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
  return results;
}

void write_score_csv(const std::filesystem::path& path, const std::vector<BugArtifacts>& all,
                     ScoreTable BugArtifacts::*table, const char* column) {
  std::string out = std::string("bug_id,file_path,") + column + "\n";
  for (const auto& art : all) {
    for (const auto& [file, score] : (art.*table).scores)
      out += csv_row({art.bug_id, file, fmt_double(score)});
  }
  atomic_write_file(path, out);
}

void write_features_csv(const std::filesystem::path& path, const std::vector<BugArtifacts>& all) {
  std::string out = "bug_id,file_path,susp_r,susp_h,susp_s,label\n";
  for (const auto& art : all) {
    for (const auto& row : art.rows)
      out += csv_row({art.bug_id, row.file_path, fmt_double(row.susp_r), fmt_double(row.susp_h),
                      fmt_double(row.susp_s), row.label ? "1" : "0"});
  }
  atomic_write_file(path, out);
}

json split_json(const ScoreContext& ctx) {
  json j;
  j["train"] = ctx.train_bugs;
  j["test"] = ctx.test_bugs;
  return j;
}

ScoreContext make_score_context(const RunConfig& cfg, const LoadedData& data,
                                std::optional<ScoreComponent> only) {
  ScoreContext ctx{cfg, data, only, {}, {}, {}, {}, std::nullopt};
  auto [train, test] = split_train_test(data.corpus, data.index, data.log, cfg.split_ratio);
  ctx.train_bugs = std::move(train);
  ctx.test_bugs = std::move(test);
  if (!only || *only == ScoreComponent::trace)
    ctx.catalog = ArtifactCatalog::build(data.corpus, data.index, data.log);

  const bool needs_structure = !only || *only == ScoreComponent::structure;
  if (needs_structure && !cfg.sources.empty()) {
    // Union of candidate files over every scored bug's snapshot, lexed once.
    std::set<std::string> union_files;
    std::int64_t window_start = std::numeric_limits<std::int64_t>::max();
    for (const auto& list : {ctx.train_bugs, ctx.test_bugs}) {
      for (const auto& id : list) {
        const std::int64_t created = data.corpus.at(id).created_date;
        window_start = std::min(window_start, created);
        const FileSnapshot snap = snapshot_files(data.log, created);
        union_files.insert(snap.files.begin(), snap.files.end());
      }
    }
    ctx.code_fields = load_code_fields(cfg, union_files);

    if (cfg.snapshot_granularity == SnapshotGranularity::per_window) {
      // One index at the window start; files added later simply score zero.
      std::map<std::string, CodeFields> subset;
      for (const auto& path : snapshot_files(data.log, window_start).files) {
        auto it = ctx.code_fields.find(path);
        if (it != ctx.code_fields.end()) subset.emplace(path, it->second);
      }
      if (!subset.empty()) ctx.window_index = StructuredIndex::build(subset);
    }
  }
  return ctx;
}

}  // namespace

void stage_ingest(const RunConfig& cfg, const LoadedData* pre) {
  validate(cfg);
  LoadedData local;
  const LoadedData& data = pre ? *pre : (local = load_inputs(cfg), local);

  json summary;
  summary["project"] = data.project;
  summary["issues"] = data.corpus.size();
  summary["bugs"] = data.corpus.bug_count();
  summary["features"] = data.corpus.size() - data.corpus.bug_count();
  summary["rejected_ids"] = data.corpus.rejected_ids();
  if (!data.corpus.rejected_ids().empty())
    summary["rejection_diagnostic"] = data.corpus.rejection_diagnostic();
  summary["commits"] = data.log.size();
  summary["linked_issues"] = data.index.issue_to_commits.size();
  summary["linked_commits"] = data.index.commit_to_issues.size();
  if (data.log.size() > 0) {
    summary["first_commit"] = format_iso8601(data.log.commits().front().timestamp);
    summary["last_commit"] = format_iso8601(data.log.commits().back().timestamp);
  }
  atomic_write_file(cfg.workdir / "corpus_summary.json", summary.dump(2) + "\n");
}

void stage_score(const RunConfig& cfg, const LoadedData* pre,
                 std::optional<ScoreComponent> only) {
  validate(cfg);
  LoadedData local;
  const LoadedData& data = pre ? *pre : (local = load_inputs(cfg), local);

  ScoreContext ctx = make_score_context(cfg, data, only);
  const auto all = score_all_bugs(ctx);

  atomic_write_file(cfg.workdir / "split.json", split_json(ctx).dump(2) + "\n");
  if (!only || *only == ScoreComponent::trace)
    write_score_csv(cfg.workdir / "scores_trace.csv", all, &BugArtifacts::trace, "susp_r");
  if (!only || *only == ScoreComponent::history)
    write_score_csv(cfg.workdir / "scores_history.csv", all, &BugArtifacts::history, "susp_h");
  if (!only || *only == ScoreComponent::structure)
    write_score_csv(cfg.workdir / "scores_structure.csv", all, &BugArtifacts::structure, "susp_s");
  if (!only) write_features_csv(cfg.workdir / "features.csv", all);

  if (cfg.dump_vocab && !ctx.test_bugs.empty()) {
    // Debug aid: the vector space of the first test bug's trace query.
    const IssueReport& query = data.corpus.at(ctx.test_bugs.front());
    const auto artifacts = select_artifacts(query, data.corpus, data.index, data.log, cfg.cutoff,
                                            cfg.limits);
    if (!artifacts.empty())
      build_query_space(query, data.corpus, artifacts)
          .export_idf_csv(cfg.workdir / "vocab_idf.csv");
  }
}

namespace {

struct FeatureFile {
  // bug id -> raw rows in file order
  std::map<std::string, std::vector<FeatureRow>> rows;
};

FeatureFile read_features_csv(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path))
    throw Error(Errc::UnreadableSource, path.string() + " not found; run the score stage first");
  FeatureFile out;
  const auto rows = read_csv_file(path);
  for (size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() < 6) continue;
    FeatureRow row;
    row.file_path = rows[r][1];
    row.susp_r = std::stod(rows[r][2]);
    row.susp_h = std::stod(rows[r][3]);
    row.susp_s = std::stod(rows[r][4]);
    row.label = rows[r][5] == "1";
    out.rows[rows[r][0]].push_back(std::move(row));
  }
  return out;
}

std::pair<std::vector<std::string>, std::vector<std::string>> read_split_json(
    const std::filesystem::path& path) {
  if (!std::filesystem::exists(path))
    throw Error(Errc::UnreadableSource, path.string() + " not found; run the score stage first");
  json j = json::parse(read_file(path));
  return {j.at("train").get<std::vector<std::string>>(),
          j.at("test").get<std::vector<std::string>>()};
}

std::vector<FeatureRow> prepared_rows(const std::vector<FeatureRow>& raw, const FusionSpec& spec) {
  if (spec.kind == FusionKind::borda) return raw;  // rank-based, scale-free
  if (spec.normalization == Normalization::minmax_per_query) return normalize_per_query(raw);
  return raw;
}

RankedList rank_for_bug(const FusionSpec& spec, const Model* model, const std::string& bug_id,
                        const std::vector<FeatureRow>& raw) {
  const auto rows = prepared_rows(raw, spec);
  if (is_supervised(spec.kind)) return predict_rank(*model, bug_id, rows);
  return fuse(bug_id, rows, spec);
}

ModelKind model_kind_of(FusionKind kind) {
  switch (kind) {
    case FusionKind::lr: return ModelKind::lr;
    case FusionKind::dt: return ModelKind::dt;
    case FusionKind::rf: return ModelKind::rf;
    case FusionKind::mlp: return ModelKind::mlp;
    default: throw Error(Errc::ConfigError, "not a supervised composer");
  }
}

std::string rankings_filename(FusionKind kind) {
  return std::string("rankings_") + fusion_kind_name(kind) + ".csv";
}

struct TrainedComposer {
  FusionSpec spec;
  std::unique_ptr<Model> model;  // null for unsupervised
};

TrainedComposer train_composer(const RunConfig& cfg, const FusionSpec& spec,
                               const FeatureFile& features,
                               const std::vector<std::string>& train_bugs) {
  TrainedComposer tc;
  tc.spec = spec;
  tc.spec.seed = cfg.seed;
  if (!is_supervised(spec.kind)) return tc;

  std::vector<FeatureRow> train_rows;
  for (const auto& bug : train_bugs) {
    auto it = features.rows.find(bug);
    if (it == features.rows.end()) continue;
    const auto rows = prepared_rows(it->second, tc.spec);
    train_rows.insert(train_rows.end(), rows.begin(), rows.end());
  }
  if (train_rows.empty())
    throw Error(Errc::TooFewBugs, "no training rows for " +
                                      std::string(fusion_kind_name(spec.kind)));
  const auto balanced = undersample(train_rows, cfg.seed);
  tc.model = train_model(model_kind_of(spec.kind), balanced, cfg.hyper, cfg.seed);
  return tc;
}

}  // namespace

void stage_fuse(const RunConfig& cfg, const LoadedData*) {
  validate(cfg);
  const FeatureFile features = read_features_csv(cfg.workdir / "features.csv");
  const auto [train_bugs, test_bugs] = read_split_json(cfg.workdir / "split.json");

  bool first = true;
  for (const auto& spec : cfg.composers) {
    const TrainedComposer tc = train_composer(cfg, spec, features, train_bugs);
    std::string out = "bug_id,rank,file_path,score\n";
    for (const auto& bug : test_bugs) {
      auto it = features.rows.find(bug);
      if (it == features.rows.end()) continue;
      const RankedList ranked = rank_for_bug(tc.spec, tc.model.get(), bug, it->second);
      for (size_t i = 0; i < ranked.candidates.size(); ++i)
        out += csv_row({bug, std::to_string(i + 1), ranked.candidates[i].first,
                        fmt_double(ranked.candidates[i].second)});
    }
    atomic_write_file(cfg.workdir / rankings_filename(spec.kind), out);
    if (first) {
      atomic_write_file(cfg.workdir / "rankings.csv", out);
      first = false;
    }
  }
}

namespace {

std::map<std::string, RankedList> read_rankings_csv(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path))
    throw Error(Errc::UnreadableSource, path.string() + " not found; run the fuse stage first");
  std::map<std::string, RankedList> out;
  const auto rows = read_csv_file(path);
  for (size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() < 4) continue;
    RankedList& list = out[rows[r][0]];
    list.bug_id = rows[r][0];
    list.candidates.emplace_back(rows[r][2], std::stod(rows[r][3]));
  }
  return out;
}

json report_json_for(const MetricsReport& report) {
  json j;
  j["evaluated"] = report.evaluated;
  j["excluded_empty_truth"] = report.excluded_empty_truth;
  j["excluded_from_mrr"] = report.excluded_from_mrr;
  j["aggregates"] = {{"MAP", report.map},   {"MRR", report.mrr},   {"Top1", report.top1},
                     {"Top5", report.top5}, {"Top10", report.top10}};
  json per_bug = json::array();
  for (const auto& r : report.per_bug) {
    json b;
    b["bug_id"] = r.bug_id;
    b["ap"] = r.ap;
    if (r.first_relevant_rank) b["first_relevant_rank"] = *r.first_relevant_rank;
    per_bug.push_back(std::move(b));
  }
  j["per_bug"] = std::move(per_bug);
  return j;
}

}  // namespace

std::map<std::string, MetricsReport> stage_evaluate(const RunConfig& cfg, const LoadedData* pre) {
  validate(cfg);
  LoadedData local;
  const LoadedData& data = pre ? *pre : (local = load_inputs(cfg), local);
  const auto [train_bugs, test_bugs] = read_split_json(cfg.workdir / "split.json");
  (void)train_bugs;

  std::map<std::string, MetricsReport> reports;
  json full;
  full["project"] = data.project;
  // Candidates are never filtered down: every file alive at the query bug's
  // creation is ranked and evaluated.
  full["candidate_policy"] = "all snapshot files";

  for (const auto& spec : cfg.composers) {
    const auto rankings = read_rankings_csv(cfg.workdir / rankings_filename(spec.kind));
    std::vector<PerBugResult> per_bug;
    int excluded = 0;
    for (const auto& bug : test_bugs) {
      auto it = rankings.find(bug);
      if (it == rankings.end()) continue;
      const std::set<std::string> truth =
          ground_truth(data.corpus.at(bug), data.index, data.log, cfg.truth_policy);
      if (truth.empty()) {
        ++excluded;
        continue;
      }
      PerBugResult r;
      r.bug_id = bug;
      r.ap = average_precision(it->second, truth);
      r.first_relevant_rank = first_relevant_rank(it->second, truth);
      per_bug.push_back(std::move(r));
    }
    if (per_bug.empty())
      throw Error(Errc::TooFewBugs, "no evaluable test bugs for " +
                                        std::string(fusion_kind_name(spec.kind)));
    MetricsReport report = aggregate(data.project, std::move(per_bug), excluded);
    full["composers"][fusion_kind_name(spec.kind)] = report_json_for(report);
    reports.emplace(fusion_kind_name(spec.kind), std::move(report));
  }

  atomic_write_file(cfg.workdir / "report.json", full.dump(2) + "\n");

  bool first = true;
  for (const auto& spec : cfg.composers) {
    const auto& report = reports.at(fusion_kind_name(spec.kind));
    std::string csv = "PROJECT,MAP,MRR,Top1,Top5,Top10\n";
    csv += csv_row({report.project, fmt_metric(report.map), fmt_metric(report.mrr),
                    fmt_metric(report.top1), fmt_metric(report.top5), fmt_metric(report.top10)});
    atomic_write_file(cfg.workdir / (std::string("report_") + fusion_kind_name(spec.kind) + ".csv"),
                      csv);
    if (first) {
      atomic_write_file(cfg.workdir / "report.csv", csv);
      first = false;
    }
  }
  return reports;
}

PipelineResult run_pipeline(const RunConfig& cfg) {
  validate(cfg);
  const LoadedData data = load_inputs(cfg);
  stage_ingest(cfg, &data);
  stage_score(cfg, &data);
  stage_fuse(cfg, &data);
  PipelineResult result;
  result.reports = stage_evaluate(cfg, &data);
  result.workdir = cfg.workdir;

  json manifest;
  manifest["tool"] = "irbl 0.1.0";
  manifest["seed"] = cfg.seed;
  manifest["cutoff"] = cfg.cutoff == CutoffMode::relaxed ? "relaxed" : "strict";
  manifest["truth_policy"] =
      cfg.truth_policy == TruthPolicy::all_changed ? "all_changed" : "exclude_added";
  manifest["bugcache"] = {
      {"k", cfg.bugcache.window_days},
      {"cutoff", cfg.bugcache.cutoff == BugCacheCutoff::created_date ? "created" : "resolved"},
      {"fix_regex", cfg.bugcache.fix_regex},
      {"allow_leakage", cfg.bugcache.allow_leakage}};
  manifest["bm25"] = {{"k1", cfg.bm25.k1}, {"b", cfg.bm25.b}};
  manifest["split_ratio"] = cfg.split_ratio;
  manifest["snapshot_granularity"] =
      cfg.snapshot_granularity == SnapshotGranularity::per_window ? "per_window" : "per_bug";
  json composers = json::array();
  for (const auto& c : cfg.composers) {
    composers.push_back({{"kind", fusion_kind_name(c.kind)},
                         {"a", c.a},
                         {"b", c.b},
                         {"top_n", c.top_n},
                         {"seed", cfg.seed}});
  }
  manifest["composers"] = std::move(composers);
  json hashes;
  hashes["issues"] = hex64(fnv1a64_file(cfg.issues));
  hashes["commits"] = std::filesystem::is_directory(cfg.commits)
                          ? "git:" + cfg.commits.string()
                          : hex64(fnv1a64_file(cfg.commits));
  if (!cfg.links.empty()) hashes["links"] = hex64(fnv1a64_file(cfg.links));
  manifest["input_hashes"] = std::move(hashes);
  atomic_write_file(cfg.workdir / "run_manifest.json", manifest.dump(2) + "\n");
  return result;
}

// --- compare -----------------------------------------------------------------

namespace {

struct ReportTable {
  // project -> 5 metric values (MAP, MRR, TOP1, TOP5, TOP10)
  std::map<std::string, std::array<double, 5>> rows;
};

ReportTable read_report_csv(const std::filesystem::path& path) {
  const auto rows = read_csv_file(path);
  if (rows.empty() || rows[0].size() < 6)
    throw Error(Errc::UnreadableSource, path.string() + " is not a report CSV");
  ReportTable table;
  for (size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() < 6) continue;
    std::array<double, 5> vals{};
    for (int m = 0; m < 5; ++m) vals[m] = std::stod(rows[r][m + 1]);
    table.rows[rows[r][0]] = vals;
  }
  return table;
}

}  // namespace

std::vector<ComparisonRow> compare_runs(const std::filesystem::path& report_a,
                                        const std::filesystem::path& report_b, CompareTest test) {
  const ReportTable a = read_report_csv(report_a);
  const ReportTable b = read_report_csv(report_b);
  std::vector<std::string> common;
  for (const auto& [project, _] : a.rows)
    if (b.rows.count(project)) common.push_back(project);
  if (common.size() < 3)
    throw Error(Errc::InsufficientOverlap, "reports share only " +
                                               std::to_string(common.size()) + " projects");

  static const char* kMetrics[5] = {"MAP", "MRR", "Top1", "Top5", "Top10"};
  std::vector<ComparisonRow> out;
  for (int m = 0; m < 5; ++m) {
    std::vector<double> va, vb;
    for (const auto& project : common) {
      va.push_back(a.rows.at(project)[m]);
      vb.push_back(b.rows.at(project)[m]);
    }
    ComparisonRow row;
    row.metric = kMetrics[m];
    try {
      if (test == CompareTest::ttest) {
        const auto res = paired_ttest(va, vb);
        row.statistic = res.t;
        row.p_value = res.p;
      } else {
        const auto res = ks_test(va, vb);
        row.statistic = res.d;
        row.p_value = res.p;
      }
    } catch (const Error& e) {
      if (e.code() != Errc::ZeroVariance) throw;
      row.note = "ZeroVariance";
    }
    out.push_back(std::move(row));
  }
  return out;
}

void write_comparison_csv(const std::vector<ComparisonRow>& rows,
                          const std::filesystem::path& out) {
  std::string csv = "metric,statistic,p_value,note\n";
  for (const auto& r : rows)
    csv += csv_row({r.metric, fmt_double(r.statistic), fmt_double(r.p_value), r.note});
  atomic_write_file(out, csv);
}

}  // namespace irbl
