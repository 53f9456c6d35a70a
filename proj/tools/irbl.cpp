#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "irbl/errors.hpp"
#include "irbl/pipeline.hpp"
#include "irbl/util.hpp"

#include <json.hpp>

namespace {

using namespace irbl;

struct CommonOpts {
  std::string config_file;
  std::string issues, commits, links, sources, workdir;
  std::string cutoff, truth_policy, composer, bugcache_cutoff;
  std::string snapshot_granularity;
  std::int64_t seed = -1;
  int threads = -1;
  bool allow_leakage = false;
  bool dump_vocab = false;
};

void add_common_flags(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("-c,--config", o.config_file, "flat key=value config file");
  cmd->add_option("--issues", o.issues, "issues.jsonl (or .csv) path");
  cmd->add_option("--commits", o.commits, "commits.jsonl path or git clone directory");
  cmd->add_option("--links", o.links, "optional links.csv with issue_id,commit_hash rows");
  cmd->add_option("--sources", o.sources, "checkout directory for the structure component");
  cmd->add_option("--workdir", o.workdir, "artifact output directory");
  cmd->add_option("--cutoff", o.cutoff, "artifact selection cutoff: relaxed|strict");
  cmd->add_option("--truth-policy", o.truth_policy, "ground truth policy: all|exclude-added");
  cmd->add_option("--composer", o.composer, "comma list of composers (fixed_weight, combsum, "
                                            "combmnz, combanz, corrb, borda, lr, dt, rf, mlp)");
  cmd->add_option("--bugcache-cutoff", o.bugcache_cutoff,
                  "history cutoff date: created|resolved (resolved leaks and needs "
                  "--allow-leakage)");
  cmd->add_flag("--allow-leakage", o.allow_leakage,
                "explicitly permit the leaky resolved-date history cutoff");
  cmd->add_option("--seed", o.seed, "seed for sampling and model training");
  cmd->add_option("--threads", o.threads, "scoring worker threads (0 = auto)");
  cmd->add_option("--snapshot-granularity", o.snapshot_granularity,
                  "structure index granularity: per_bug|per_window");
  cmd->add_flag("--dump-vocab", o.dump_vocab, "export the trace vocabulary/idf table");
}

RunConfig build_config(const CommonOpts& o) {
  RunConfig cfg;
  if (!o.config_file.empty()) cfg = load_run_config(o.config_file);
  if (!o.issues.empty()) apply_config_entry(cfg, "issues", o.issues);
  if (!o.commits.empty()) apply_config_entry(cfg, "commits", o.commits);
  if (!o.links.empty()) apply_config_entry(cfg, "links", o.links);
  if (!o.sources.empty()) apply_config_entry(cfg, "sources", o.sources);
  if (!o.workdir.empty()) apply_config_entry(cfg, "workdir", o.workdir);
  if (!o.cutoff.empty()) apply_config_entry(cfg, "cutoff", o.cutoff);
  if (!o.truth_policy.empty()) apply_config_entry(cfg, "truth_policy", o.truth_policy);
  if (!o.composer.empty()) apply_config_entry(cfg, "composer", o.composer);
  if (!o.bugcache_cutoff.empty()) apply_config_entry(cfg, "bugcache.cutoff", o.bugcache_cutoff);
  if (o.allow_leakage) apply_config_entry(cfg, "allow_leakage", "true");
  if (o.seed >= 0) apply_config_entry(cfg, "seed", std::to_string(o.seed));
  if (o.threads >= 0) apply_config_entry(cfg, "threads", std::to_string(o.threads));
  if (!o.snapshot_granularity.empty())
    apply_config_entry(cfg, "snapshot_granularity", o.snapshot_granularity);
  if (o.dump_vocab) apply_config_entry(cfg, "dump_vocab", "true");
  return cfg;
}

void print_report_line(const std::string& composer, const MetricsReport& r) {
  std::printf("%-14s MAP %.3f  MRR %.3f  Top1 %.3f  Top5 %.3f  Top10 %.3f  (%d bugs)\n",
              composer.c_str(), r.map, r.mrr, r.top1, r.top5, r.top10, r.evaluated);
}

int dispatch(int argc, char** argv) {
  CLI::App app{"information-retrieval bug localization toolkit"};
  app.require_subcommand(1);

  CommonOpts o;
  std::string score_component;
  std::string compare_a, compare_b, compare_test = "ttest", compare_out;
  std::string report_path;

  CLI::App* ingest = app.add_subcommand("ingest", "load and validate issues, commits and links");
  add_common_flags(ingest, o);

  CLI::App* score = app.add_subcommand("score", "compute component score tables");
  score->add_option("component", score_component, "trace|history|structure|all")
      ->required()
      ->check(CLI::IsMember({"trace", "history", "structure", "all"}));
  add_common_flags(score, o);

  CLI::App* fuse = app.add_subcommand("fuse", "fuse persisted score tables into rankings");
  add_common_flags(fuse, o);

  CLI::App* evaluate = app.add_subcommand("evaluate", "evaluate rankings against ground truth");
  add_common_flags(evaluate, o);

  CLI::App* run = app.add_subcommand("run", "full pipeline: ingest, score, fuse, evaluate");
  add_common_flags(run, o);

  CLI::App* compare = app.add_subcommand("compare", "statistical comparison of two report CSVs");
  compare->add_option("report_a", compare_a)->required();
  compare->add_option("report_b", compare_b)->required();
  compare->add_option("--test", compare_test, "ttest|ks")
      ->check(CLI::IsMember({"ttest", "ks"}));
  compare->add_option("-o,--output", compare_out, "write the comparison CSV here");

  CLI::App* report = app.add_subcommand("report", "print a report.json as a table");
  report->add_option("report_json", report_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);  // CLI11 prints its own message
  }

  if (compare->parsed()) {
    const CompareTest test = compare_test == "ks" ? CompareTest::ks : CompareTest::ttest;
    const auto rows = compare_runs(compare_a, compare_b, test);
    std::printf("metric  statistic  p_value  note\n");
    for (const auto& r : rows)
      std::printf("%-7s %9.4f %8.4f  %s\n", r.metric.c_str(), r.statistic, r.p_value,
                  r.note.c_str());
    if (!compare_out.empty()) write_comparison_csv(rows, compare_out);
    return 0;
  }

  if (report->parsed()) {
    const auto j = nlohmann::json::parse(read_file(report_path));
    std::printf("PROJECT %s\n", j.value("project", "?").c_str());
    std::printf("%-14s %-7s %-7s %-7s %-7s %-7s\n", "COMPOSER", "MAP", "MRR", "TOP1", "TOP5",
                "TOP10");
    for (const auto& [name, body] : j.at("composers").items()) {
      const auto& a = body.at("aggregates");
      std::printf("%-14s %.3f   %.3f   %.3f   %.3f   %.3f\n", name.c_str(),
                  a.at("MAP").get<double>(), a.at("MRR").get<double>(),
                  a.at("Top1").get<double>(), a.at("Top5").get<double>(),
                  a.at("Top10").get<double>());
    }
    return 0;
  }

  RunConfig cfg = build_config(o);
  if (ingest->parsed()) {
    stage_ingest(cfg);
    std::printf("ingest ok: %s\n", (cfg.workdir / "corpus_summary.json").c_str());
  } else if (score->parsed()) {
    std::optional<ScoreComponent> only;
    if (score_component == "trace") only = ScoreComponent::trace;
    else if (score_component == "history") only = ScoreComponent::history;
    else if (score_component == "structure") only = ScoreComponent::structure;
    stage_score(cfg, nullptr, only);
    std::printf("score ok (%s): %s\n", score_component.c_str(), cfg.workdir.c_str());
  } else if (fuse->parsed()) {
    stage_fuse(cfg);
    std::printf("fuse ok: %s\n", cfg.workdir.c_str());
  } else if (evaluate->parsed()) {
    const auto reports = stage_evaluate(cfg);
    for (const auto& [name, r] : reports) print_report_line(name, r);
  } else if (run->parsed()) {
    const auto result = run_pipeline(cfg);
    for (const auto& [name, r] : result.reports) print_report_line(name, r);
    std::printf("artifacts: %s\n", result.workdir.c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.exit_status();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
