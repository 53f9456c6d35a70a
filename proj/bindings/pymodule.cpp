#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "irbl/bugcache.hpp"
#include "irbl/codestruct.hpp"
#include "irbl/composer.hpp"
#include "irbl/corpus.hpp"
#include "irbl/errors.hpp"
#include "irbl/evalmetrics.hpp"
#include "irbl/pipeline.hpp"
#include "irbl/textprep.hpp"
#include "irbl/tracescore.hpp"
#include "irbl/util.hpp"

namespace py = pybind11;
using namespace irbl;

namespace {

std::int64_t to_epoch(const py::object& ts) {
  if (py::isinstance<py::int_>(ts)) return ts.cast<std::int64_t>();
  return parse_iso8601(ts.cast<std::string>());
}

TruthPolicy to_policy(const std::string& name) {
  if (name == "all" || name == "all_changed") return TruthPolicy::all_changed;
  if (name == "exclude-added" || name == "exclude_added") return TruthPolicy::exclude_added;
  throw Error(Errc::ConfigError, "truth policy must be all or exclude-added");
}

CutoffMode to_cutoff(const std::string& name) {
  if (name == "relaxed") return CutoffMode::relaxed;
  if (name == "strict") return CutoffMode::strict;
  throw Error(Errc::ConfigError, "cutoff must be relaxed or strict");
}

// (path, susp_r, susp_h, susp_s[, label])
std::vector<FeatureRow> rows_from_py(const py::list& raw) {
  std::vector<FeatureRow> rows;
  for (const auto& item : raw) {
    auto t = item.cast<py::tuple>();
    if (t.size() < 4) throw Error(Errc::ConfigError, "feature rows need (path, r, h, s[, label])");
    FeatureRow row;
    row.file_path = t[0].cast<std::string>();
    row.susp_r = t[1].cast<double>();
    row.susp_h = t[2].cast<double>();
    row.susp_s = t[3].cast<double>();
    if (t.size() > 4) row.label = t[4].cast<bool>();
    rows.push_back(std::move(row));
  }
  return rows;
}

py::list ranked_to_py(const RankedList& ranked) {
  py::list out;
  for (const auto& [path, score] : ranked.candidates) out.append(py::make_tuple(path, score));
  return out;
}

py::dict report_to_py(const MetricsReport& r) {
  py::dict d;
  d["project"] = r.project;
  d["evaluated"] = r.evaluated;
  d["excluded_empty_truth"] = r.excluded_empty_truth;
  d["excluded_from_mrr"] = r.excluded_from_mrr;
  d["MAP"] = r.map;
  d["MRR"] = r.mrr;
  d["Top1"] = r.top1;
  d["Top5"] = r.top5;
  d["Top10"] = r.top10;
  py::list per_bug;
  for (const auto& b : r.per_bug) {
    py::dict e;
    e["bug_id"] = b.bug_id;
    e["ap"] = b.ap;
    if (b.first_relevant_rank) e["first_relevant_rank"] = *b.first_relevant_rank;
    per_bug.append(std::move(e));
  }
  d["per_bug"] = std::move(per_bug);
  return d;
}

}  // namespace

PYBIND11_MODULE(_irbl, m) {
  m.doc() = "information-retrieval bug localization toolkit (core bindings)";

  py::register_exception<Error>(m, "IrblError");

  // text preprocessing
  m.def("porter_stem", [](const std::string& w) { return porter_stem(w); }, py::arg("word"));
  m.def("preprocess", [](const std::string& t) { return preprocess(t); }, py::arg("text"));
  m.def("split_tokens", [](const std::string& t) { return split_tokens(t); }, py::arg("text"));
  m.def("is_stop_word", [](const std::string& t) { return is_stop_word(t); }, py::arg("token"));

  // corpus
  py::class_<IssueCorpus>(m, "IssueCorpus")
      .def("__len__", &IssueCorpus::size)
      .def("bug_count", &IssueCorpus::bug_count)
      .def("rejected_ids", &IssueCorpus::rejected_ids)
      .def("ids",
           [](const IssueCorpus& c) {
             std::vector<std::string> ids;
             for (const auto& i : c.issues()) ids.push_back(i.id);
             return ids;
           })
      .def("issue", [](const IssueCorpus& c, const std::string& id) {
        const IssueReport& i = c.at(id);
        py::dict d;
        d["id"] = i.id;
        d["kind"] = i.kind == IssueKind::bug ? "bug" : "feature";
        d["summary"] = i.summary;
        d["description"] = i.description;
        d["created_date"] = i.created_date;
        if (i.resolved_date) d["resolved_date"] = *i.resolved_date;
        d["links"] = i.linked_issue_ids;
        return d;
      });

  py::class_<CommitLog>(m, "CommitLog").def("__len__", &CommitLog::size);

  py::class_<TraceIndex>(m, "TraceIndex")
      .def("commits_for",
           [](const TraceIndex& idx, const std::string& issue) {
             const auto* c = idx.commits_for(issue);
             return c ? *c : std::set<std::string>{};
           })
      .def("linked_issue_count",
           [](const TraceIndex& idx) { return idx.issue_to_commits.size(); });

  m.def(
      "load_issues",
      [](const std::filesystem::path& path, const std::string& format) {
        return load_issues(path, format == "csv" ? IssueFormat::csv : IssueFormat::jsonl);
      },
      py::arg("path"), py::arg("format") = "jsonl");

  m.def(
      "load_commits",
      [](const std::filesystem::path& source, const std::set<std::string>& extensions) {
        CorpusOptions opts;
        opts.source_extensions = extensions;
        return load_commits(source, opts);
      },
      py::arg("source"), py::arg("extensions") = std::set<std::string>{".java", ".py"});

  m.def(
      "link_issues_commits",
      [](const IssueCorpus& corpus, const CommitLog& log, const std::string& links_csv) {
        std::vector<std::pair<std::string, std::string>> links;
        if (!links_csv.empty()) links = load_links_csv(links_csv);
        return link_issues_commits(corpus, log, links);
      },
      py::arg("corpus"), py::arg("log"), py::arg("links_csv") = "");

  m.def(
      "snapshot_files",
      [](const CommitLog& log, const py::object& as_of) {
        return snapshot_files(log, to_epoch(as_of)).files;
      },
      py::arg("log"), py::arg("as_of"));

  m.def(
      "ground_truth",
      [](const IssueCorpus& corpus, const std::string& bug_id, const TraceIndex& index,
         const CommitLog& log, const std::string& policy) {
        return ground_truth(corpus.at(bug_id), index, log, to_policy(policy));
      },
      py::arg("corpus"), py::arg("bug_id"), py::arg("index"), py::arg("log"),
      py::arg("policy") = "all");

  // per-bug component scores
  m.def(
      "trace_scores",
      [](const IssueCorpus& corpus, const CommitLog& log, const TraceIndex& index,
         const std::string& bug_id, const std::string& cutoff) {
        const IssueReport& query = corpus.at(bug_id);
        const FileSnapshot snap = snapshot_files(log, query.created_date);
        const auto artifacts =
            select_artifacts(query, corpus, index, log, to_cutoff(cutoff), ArtifactLimits{});
        if (artifacts.empty()) return std::map<std::string, double>{};
        const VectorSpace space = build_query_space(query, corpus, artifacts);
        const TraceGraph graph =
            build_trace_graph(query, artifacts, space, corpus, index, log, snap);
        return trace_score(graph).scores;
      },
      py::arg("corpus"), py::arg("log"), py::arg("index"), py::arg("bug_id"),
      py::arg("cutoff") = "relaxed");

  m.def("bugcache_term", &bugcache_term, py::arg("t_c_days"), py::arg("k_days"));

  m.def(
      "bugcache_scores",
      [](const IssueCorpus& corpus, const CommitLog& log, const std::string& bug_id, int k,
         const std::string& cutoff, bool allow_leakage) {
        BugCacheConfig cfg;
        cfg.window_days = k;
        cfg.cutoff = cutoff == "resolved" ? BugCacheCutoff::resolved_date
                                          : BugCacheCutoff::created_date;
        cfg.allow_leakage = allow_leakage;
        const IssueReport& query = corpus.at(bug_id);
        const FileSnapshot snap = snapshot_files(log, query.created_date);
        const auto commits = find_fix_commits(log, corpus, query, cfg);
        return bugcache_score(commits, query, cfg, snap).scores;
      },
      py::arg("corpus"), py::arg("log"), py::arg("bug_id"), py::arg("k") = 15,
      py::arg("cutoff") = "created", py::arg("allow_leakage") = false);

  // code structure
  m.def(
      "extract_fields",
      [](const std::string& content, const std::string& language) {
        const CodeFields f = extract_fields(content, parse_language(language));
        py::dict d;
        d["type_names"] = f.type_names;
        d["method_names"] = f.method_names;
        d["variable_names"] = f.variable_names;
        d["comments"] = f.comments;
        return d;
      },
      py::arg("content"), py::arg("language"));

  py::class_<StructuredIndex>(m, "StructuredIndex")
      .def(py::init([](const std::map<std::string, std::string>& files,
                       const std::string& language) {
             std::map<std::string, CodeFields> fields;
             for (const auto& [path, content] : files)
               fields.emplace(path, extract_fields(content, parse_language(language)));
             return StructuredIndex::build(fields);
           }),
           py::arg("files"), py::arg("language") = "java")
      .def("files", &StructuredIndex::files)
      .def(
          "score",
          [](const StructuredIndex& idx, const std::string& summary,
             const std::string& description, double k1, double b) {
            IssueReport q;
            q.id = "query";
            q.summary = summary;
            q.description = description;
            return structure_score(q, idx, Bm25Params{k1, b}).scores;
          },
          py::arg("summary"), py::arg("description") = "", py::arg("k1") = 1.2,
          py::arg("b") = 0.75);

  // fusion
  m.def(
      "fuse_rows",
      [](const py::list& raw, const std::string& kind, double a, double b, int top_n,
         bool normalize) {
        auto rows = rows_from_py(raw);
        FusionSpec spec;
        spec.kind = parse_fusion_kind(kind);
        spec.a = a;
        spec.b = b;
        spec.top_n = top_n;
        spec.normalization = normalize ? Normalization::minmax_per_query : Normalization::none;
        if (spec.kind != FusionKind::borda && normalize) rows = normalize_per_query(rows);
        return ranked_to_py(fuse("query", rows, spec));
      },
      py::arg("rows"), py::arg("kind"), py::arg("a") = 0.2, py::arg("b") = 0.3,
      py::arg("top_n") = 10, py::arg("normalize") = false);

  m.def(
      "undersample_rows",
      [](const py::list& raw, std::uint64_t seed) {
        py::list out;
        for (const auto& row : undersample(rows_from_py(raw), seed))
          out.append(py::make_tuple(row.file_path, row.susp_r, row.susp_h, row.susp_s, row.label));
        return out;
      },
      py::arg("rows"), py::arg("seed"));

  py::class_<Model, std::shared_ptr<Model>>(m, "Model")
      .def("predict",
           [](const Model& model, double r, double h, double s) {
             return model.predict_proba({r, h, s});
           })
      .def("feature_importances", [](const Model& model) -> py::object {
        const auto imp = model.feature_importances();
        if (!imp) return py::none();
        return py::make_tuple((*imp)[0], (*imp)[1], (*imp)[2]);
      });

  m.def(
      "train_model",
      [](const std::string& kind, const py::list& raw, std::uint64_t seed) {
        ModelKind mk;
        if (kind == "lr") mk = ModelKind::lr;
        else if (kind == "dt") mk = ModelKind::dt;
        else if (kind == "rf") mk = ModelKind::rf;
        else if (kind == "mlp") mk = ModelKind::mlp;
        else throw Error(Errc::ConfigError, "model kind must be lr, dt, rf or mlp");
        return std::shared_ptr<Model>(train_model(mk, rows_from_py(raw), ModelHyper{}, seed));
      },
      py::arg("kind"), py::arg("rows"), py::arg("seed") = 0);

  m.def(
      "predict_rank",
      [](const std::shared_ptr<Model>& model, const py::list& raw) {
        return ranked_to_py(predict_rank(*model, "query", rows_from_py(raw)));
      },
      py::arg("model"), py::arg("rows"));

  // evaluation
  m.def(
      "average_precision",
      [](const std::vector<std::string>& ranking, const std::set<std::string>& truth) {
        RankedList list;
        list.bug_id = "query";
        for (size_t i = 0; i < ranking.size(); ++i)
          list.candidates.emplace_back(ranking[i], static_cast<double>(ranking.size() - i));
        return average_precision(list, truth);
      },
      py::arg("ranking"), py::arg("truth"));

  m.def(
      "aggregate",
      [](const py::list& per_bug, const std::string& project) {
        std::vector<PerBugResult> results;
        for (const auto& item : per_bug) {
          auto t = item.cast<py::tuple>();
          PerBugResult r;
          r.bug_id = t[0].cast<std::string>();
          r.ap = t[1].cast<double>();
          if (t.size() > 2 && !t[2].is_none()) r.first_relevant_rank = t[2].cast<int>();
          results.push_back(std::move(r));
        }
        return report_to_py(aggregate(project, std::move(results)));
      },
      py::arg("per_bug"), py::arg("project") = "PROJECT");

  m.def(
      "compare_runs",
      [](const std::filesystem::path& report_a, const std::filesystem::path& report_b,
         const std::string& test) {
        const auto rows = compare_runs(report_a, report_b,
                                       test == "ks" ? CompareTest::ks : CompareTest::ttest);
        py::list out;
        for (const auto& r : rows) {
          py::dict d;
          d["metric"] = r.metric;
          d["statistic"] = r.statistic;
          d["p_value"] = r.p_value;
          if (!r.note.empty()) d["note"] = r.note;
          out.append(std::move(d));
        }
        return out;
      },
      py::arg("report_a"), py::arg("report_b"), py::arg("test") = "ttest");

  m.def(
      "paired_ttest",
      [](const std::vector<double>& a, const std::vector<double>& b) {
        const auto r = paired_ttest(a, b);
        return py::make_tuple(r.t, r.df, r.p);
      },
      py::arg("a"), py::arg("b"));

  m.def(
      "ks_test",
      [](const std::vector<double>& a, const std::vector<double>& b) {
        const auto r = ks_test(a, b);
        return py::make_tuple(r.d, r.p);
      },
      py::arg("a"), py::arg("b"));

  // pipeline
  m.def(
      "run_pipeline",
      [](const py::object& config) {
        RunConfig cfg;
        if (py::isinstance<py::dict>(config)) {
          for (const auto& item : config.cast<py::dict>())
            apply_config_entry(cfg, item.first.cast<std::string>(),
                               py::str(item.second).cast<std::string>());
        } else {
          cfg = load_run_config(config.cast<std::string>());
        }
        const auto result = run_pipeline(cfg);
        py::dict out;
        for (const auto& [name, report] : result.reports) out[name.c_str()] = report_to_py(report);
        return out;
      },
      py::arg("config"));

  m.def("parse_iso8601", [](const std::string& s) { return parse_iso8601(s); });
  m.attr("__version__") = "0.1.0";
}
