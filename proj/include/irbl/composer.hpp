#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "irbl/corpus.hpp"
#include "irbl/tracescore.hpp"

namespace irbl {

struct FeatureRow {
  std::string file_path;
  double susp_r = 0.0;
  double susp_h = 0.0;
  double susp_s = 0.0;
  bool label = false;

  std::array<double, 3> features() const { return {susp_r, susp_h, susp_s}; }
};

// Candidates in descending score order; ties broken by ascending path.
struct RankedList {
  std::string bug_id;
  std::vector<std::pair<std::string, double>> candidates;
};

enum class FusionKind { fixed_weight, combsum, combmnz, combanz, corrb, borda, lr, dt, rf, mlp };
enum class Normalization { minmax_per_query, none };

FusionKind parse_fusion_kind(std::string_view name);  // throws ConfigError
const char* fusion_kind_name(FusionKind kind);
bool is_supervised(FusionKind kind);

struct FusionSpec {
  FusionKind kind = FusionKind::fixed_weight;
  double a = 0.2;                     // fixed_weight report-vs-structure mix
  double b = 0.3;                     // fixed_weight history share
  int top_n = 10;                     // corrb overlap depth
  std::uint64_t seed = 0;             // mandatory for dt/rf/mlp and undersampling
  Normalization normalization = Normalization::minmax_per_query;
  std::map<std::string, double> hyper;
};

// One row per snapshot file (ascending path); missing component scores are 0,
// labels come from the ground truth. Throws Error(EmptySnapshot).
std::vector<FeatureRow> assemble_features(const FileSnapshot& snapshot, const ScoreTable& trace,
                                          const ScoreTable& history, const ScoreTable& structure,
                                          const std::set<std::string>& truth);

// Min-max scales each component to [0,1] within the query; constant columns go to 0.
std::vector<FeatureRow> normalize_per_query(std::vector<FeatureRow> rows);

// Pairs rows with scores and applies the standard ordering (score desc, path asc).
RankedList make_ranked_list(const std::string& bug_id, const std::vector<FeatureRow>& rows,
                            const std::vector<double>& scores);

RankedList fuse_fixed(const std::string& bug_id, const std::vector<FeatureRow>& rows,
                      double a = 0.2, double b = 0.3);

enum class CombVariant { sum, mnz, anz };
RankedList fuse_comb(const std::string& bug_id, const std::vector<FeatureRow>& rows,
                     CombVariant variant);

RankedList fuse_borda(const std::string& bug_id, const std::vector<FeatureRow>& rows);

RankedList fuse_corrb(const std::string& bug_id, const std::vector<FeatureRow>& rows,
                      int top_n = 10);

// Dispatcher for the unsupervised kinds (everything but lr/dt/rf/mlp).
RankedList fuse(const std::string& bug_id, const std::vector<FeatureRow>& rows,
                const FusionSpec& spec);

// Resolved bugs with ground truth, sorted by resolved date; first ceil(0.8*n)
// train, rest test. Throws Error(TooFewBugs) below five eligible bugs.
std::pair<std::vector<std::string>, std::vector<std::string>> split_train_test(
    const IssueCorpus& corpus, const TraceIndex& index, const CommitLog& log,
    double train_fraction = 0.8);

// Keeps every positive and a seeded random subset of negatives of equal size.
// Throws Error(SingleClass) when rows lack one of the labels.
std::vector<FeatureRow> undersample(const std::vector<FeatureRow>& rows, std::uint64_t seed);

// --- Supervised composers ----------------------------------------------------

class Model {
public:
  virtual ~Model() = default;
  virtual double predict_proba(const std::array<double, 3>& x) const = 0;
  // Normalized impurity decrease; only tree-based models provide one.
  virtual std::optional<std::array<double, 3>> feature_importances() const { return std::nullopt; }
};

struct ModelHyper {
  // lr
  double lr_learning_rate = 0.1;
  int lr_epochs = 1000;
  // dt / rf
  int tree_max_depth = 10;
  int tree_min_leaf = 5;
  int rf_trees = 100;
  int rf_features_per_split = 2;
  // mlp
  int mlp_hidden = 16;
  int mlp_epochs = 200;
  double mlp_learning_rate = 0.1;
};

enum class ModelKind { lr, dt, rf, mlp };

// Throws Error(NonFinite) on non-finite features.
std::unique_ptr<Model> train_model(ModelKind kind, const std::vector<FeatureRow>& rows,
                                   const ModelHyper& hyper, std::uint64_t seed);

RankedList predict_rank(const Model& model, const std::string& bug_id,
                        const std::vector<FeatureRow>& rows);

}  // namespace irbl
