#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "irbl/bugcache.hpp"
#include "irbl/codestruct.hpp"
#include "irbl/composer.hpp"
#include "irbl/corpus.hpp"
#include "irbl/evalmetrics.hpp"
#include "irbl/tracescore.hpp"

namespace irbl {

enum class SnapshotGranularity { per_bug, per_window };

struct RunConfig {
  // inputs
  std::filesystem::path issues;
  std::filesystem::path commits;
  std::filesystem::path links;    // optional explicit issue,commit links
  std::filesystem::path sources;  // optional checkout for the structure component
  std::filesystem::path workdir = "out";
  IssueFormat issues_format = IssueFormat::jsonl;
  std::string project;  // defaults to the dominant issue-id prefix
  std::set<std::string> extensions = {".java", ".py"};
  std::string language = "java";  // adapter for files with unknown extensions

  // component settings
  CutoffMode cutoff = CutoffMode::relaxed;
  TruthPolicy truth_policy = TruthPolicy::all_changed;
  BugCacheConfig bugcache;
  Bm25Params bm25;
  SnapshotGranularity snapshot_granularity = SnapshotGranularity::per_window;
  ArtifactLimits limits;

  // fusion & evaluation
  std::vector<FusionSpec> composers = {FusionSpec{}};
  double split_ratio = 0.8;
  std::uint64_t seed = 42;
  ModelHyper hyper;
  int threads = 0;  // 0 = auto
  bool dump_vocab = false;
};

// Flat key=value config file; '#' starts a comment. Unknown keys are errors.
RunConfig load_run_config(const std::filesystem::path& file);
void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value);

struct LoadedData {
  IssueCorpus corpus;
  CommitLog log;
  TraceIndex index;
  std::string project;
};

LoadedData load_inputs(const RunConfig& cfg);

enum class ScoreComponent { trace, history, structure };

// Pipeline stages; each persists its artifacts under cfg.workdir.
void stage_ingest(const RunConfig& cfg, const LoadedData* pre = nullptr);

// Computes component score tables for every split bug. With `only` set, just
// that component's CSV is written; otherwise all three plus features.csv.
void stage_score(const RunConfig& cfg, const LoadedData* pre = nullptr,
                 std::optional<ScoreComponent> only = std::nullopt);
void stage_fuse(const RunConfig& cfg, const LoadedData* pre = nullptr);
std::map<std::string, MetricsReport> stage_evaluate(const RunConfig& cfg,
                                                    const LoadedData* pre = nullptr);

struct PipelineResult {
  std::map<std::string, MetricsReport> reports;  // composer name -> metrics
  std::filesystem::path workdir;
};

// ingest -> score -> fuse -> evaluate -> run_manifest.json.
PipelineResult run_pipeline(const RunConfig& cfg);

enum class CompareTest { ttest, ks };

struct ComparisonRow {
  std::string metric;
  double statistic = 0.0;
  double p_value = 0.0;
  std::string note;  // e.g. ZeroVariance
};

// Compares two report.csv files over their common projects (>= 3 required).
std::vector<ComparisonRow> compare_runs(const std::filesystem::path& report_a,
                                        const std::filesystem::path& report_b, CompareTest test);

void write_comparison_csv(const std::vector<ComparisonRow>& rows,
                          const std::filesystem::path& out);

}  // namespace irbl
