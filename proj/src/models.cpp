#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "irbl/composer.hpp"
#include "irbl/errors.hpp"

namespace irbl {

namespace {

constexpr int kNumFeatures = 3;

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

void check_finite(const std::vector<FeatureRow>& rows) {
  for (const auto& r : rows) {
    for (double v : r.features()) {
      if (!std::isfinite(v)) throw Error(Errc::NonFinite, "non-finite feature for " + r.file_path);
    }
  }
}

// --- Logistic regression ------------------------------------------------------

class LogisticModel : public Model {
public:
  LogisticModel(const std::vector<FeatureRow>& rows, const ModelHyper& hyper) {
    const double n = static_cast<double>(rows.size());
    for (int epoch = 0; epoch < hyper.lr_epochs; ++epoch) {
      std::array<double, 3> grad_w{};
      double grad_b = 0.0;
      for (const auto& row : rows) {
        const auto x = row.features();
        const double err = predict_proba(x) - (row.label ? 1.0 : 0.0);
        for (int f = 0; f < kNumFeatures; ++f) grad_w[f] += err * x[f];
        grad_b += err;
      }
      for (int f = 0; f < kNumFeatures; ++f) w_[f] -= hyper.lr_learning_rate * grad_w[f] / n;
      b_ -= hyper.lr_learning_rate * grad_b / n;
    }
  }

  double predict_proba(const std::array<double, 3>& x) const override {
    return sigmoid(w_[0] * x[0] + w_[1] * x[1] + w_[2] * x[2] + b_);
  }

private:
  std::array<double, 3> w_{};
  double b_ = 0.0;
};

// --- CART decision tree ---------------------------------------------------------

struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double prob = 0.0;
};

struct Sample {
  std::array<double, 3> x;
  bool y;
};

double gini(double positives, double total) {
  if (total <= 0.0) return 0.0;
  const double p = positives / total;
  return 1.0 - p * p - (1.0 - p) * (1.0 - p);
}

struct SplitChoice {
  int feature = -1;
  double threshold = 0.0;
  double weighted_impurity = 0.0;
};

class Cart {
public:
  Cart(const std::vector<Sample>& data, const ModelHyper& hyper, std::mt19937_64* rng = nullptr,
       int features_per_split = kNumFeatures)
      : data_(data), hyper_(hyper), rng_(rng), features_per_split_(features_per_split) {
    std::vector<size_t> idx(data.size());
    std::iota(idx.begin(), idx.end(), 0);
    importances_.fill(0.0);
    root_ = build(idx, 0);
    normalize_importances();
  }

  double predict(const std::array<double, 3>& x) const {
    int node = root_;
    while (nodes_[node].feature >= 0)
      node = x[nodes_[node].feature] <= nodes_[node].threshold ? nodes_[node].left
                                                               : nodes_[node].right;
    return nodes_[node].prob;
  }

  const std::array<double, 3>& importances() const { return importances_; }

private:
  int build(const std::vector<size_t>& idx, int depth) {
    const double total = static_cast<double>(idx.size());
    double positives = 0.0;
    for (size_t i : idx) positives += data_[i].y ? 1.0 : 0.0;

    TreeNode node;
    node.prob = total > 0.0 ? positives / total : 0.0;
    const double node_gini = gini(positives, total);

    const bool can_split = depth < hyper_.tree_max_depth &&
                           static_cast<int>(idx.size()) >= 2 * hyper_.tree_min_leaf &&
                           node_gini > 0.0;
    std::optional<SplitChoice> split;
    if (can_split) split = best_split(idx);
    if (!split) {
      nodes_.push_back(node);
      return static_cast<int>(nodes_.size()) - 1;
    }

    std::vector<size_t> left, right;
    for (size_t i : idx)
      (data_[i].x[split->feature] <= split->threshold ? left : right).push_back(i);

    double left_pos = 0.0;
    for (size_t i : left) left_pos += data_[i].y ? 1.0 : 0.0;
    const double decrease =
        total * node_gini - static_cast<double>(left.size()) * gini(left_pos, left.size()) -
        static_cast<double>(right.size()) * gini(positives - left_pos, right.size());
    importances_[split->feature] += decrease;

    node.feature = split->feature;
    node.threshold = split->threshold;
    const int self = static_cast<int>(nodes_.size());
    nodes_.push_back(node);
    nodes_[self].left = build(left, depth + 1);
    nodes_[self].right = build(right, depth + 1);
    return self;
  }

  std::optional<SplitChoice> best_split(const std::vector<size_t>& idx) {
    std::array<int, 3> menu = {0, 1, 2};
    int menu_size = kNumFeatures;
    if (rng_ && features_per_split_ < kNumFeatures) {
      for (int i = 0; i < features_per_split_; ++i) {
        const int j = i + static_cast<int>((*rng_)() % static_cast<std::uint64_t>(kNumFeatures - i));
        std::swap(menu[i], menu[j]);
      }
      menu_size = features_per_split_;
      std::sort(menu.begin(), menu.begin() + menu_size);  // deterministic scan order
    }

    std::optional<SplitChoice> best;
    for (int mi = 0; mi < menu_size; ++mi) {
      const int f = menu[mi];
      std::vector<std::pair<double, bool>> vals;
      vals.reserve(idx.size());
      for (size_t i : idx) vals.emplace_back(data_[i].x[f], data_[i].y);
      std::sort(vals.begin(), vals.end());

      std::vector<double> prefix_pos(vals.size() + 1, 0.0);
      for (size_t i = 0; i < vals.size(); ++i)
        prefix_pos[i + 1] = prefix_pos[i] + (vals[i].second ? 1.0 : 0.0);
      const double total = static_cast<double>(vals.size());
      const double total_pos = prefix_pos[vals.size()];

      for (size_t i = 1; i < vals.size(); ++i) {
        if (vals[i].first == vals[i - 1].first) continue;
        const double n_left = static_cast<double>(i);
        const double n_right = total - n_left;
        if (n_left < hyper_.tree_min_leaf || n_right < hyper_.tree_min_leaf) continue;
        const double w = (n_left * gini(prefix_pos[i], n_left) +
                          n_right * gini(total_pos - prefix_pos[i], n_right)) /
                         total;
        const double thr = vals[i - 1].first + (vals[i].first - vals[i - 1].first) / 2.0;
        if (!best || w < best->weighted_impurity - 1e-12 ||
            (std::abs(w - best->weighted_impurity) <= 1e-12 &&
             (f < best->feature || (f == best->feature && thr < best->threshold)))) {
          best = SplitChoice{f, thr, w};
        }
      }
    }
    return best;
  }

  void normalize_importances() {
    const double sum = importances_[0] + importances_[1] + importances_[2];
    if (sum > 0.0)
      for (double& v : importances_) v /= sum;
  }

  const std::vector<Sample>& data_;
  const ModelHyper& hyper_;
  std::mt19937_64* rng_;
  int features_per_split_;
  std::vector<TreeNode> nodes_;
  int root_ = 0;
  std::array<double, 3> importances_{};
};

std::vector<Sample> to_samples(const std::vector<FeatureRow>& rows) {
  std::vector<Sample> data;
  data.reserve(rows.size());
  for (const auto& r : rows) data.push_back(Sample{r.features(), r.label});
  return data;
}

class TreeModel : public Model {
public:
  TreeModel(const std::vector<FeatureRow>& rows, const ModelHyper& hyper)
      : data_(to_samples(rows)), tree_(data_, hyper) {}

  double predict_proba(const std::array<double, 3>& x) const override { return tree_.predict(x); }

  std::optional<std::array<double, 3>> feature_importances() const override {
    return tree_.importances();
  }

private:
  std::vector<Sample> data_;
  Cart tree_;
};

class ForestModel : public Model {
public:
  ForestModel(const std::vector<FeatureRow>& rows, const ModelHyper& hyper, std::uint64_t seed) {
    const auto base = to_samples(rows);
    std::mt19937_64 master(seed);
    std::vector<std::uint64_t> tree_seeds(hyper.rf_trees);
    for (auto& s : tree_seeds) s = master();

    importances_.fill(0.0);
    boots_.reserve(hyper.rf_trees);
    trees_.reserve(hyper.rf_trees);
    for (int t = 0; t < hyper.rf_trees; ++t) {
      std::mt19937_64 rng(tree_seeds[t]);
      std::vector<Sample> boot;
      boot.reserve(base.size());
      for (size_t i = 0; i < base.size(); ++i) boot.push_back(base[rng() % base.size()]);
      boots_.push_back(std::move(boot));
      trees_.emplace_back(boots_.back(), hyper, &rng, hyper.rf_features_per_split);
      const auto& imp = trees_.back().importances();
      for (int f = 0; f < kNumFeatures; ++f) importances_[f] += imp[f];
    }
    const double sum = importances_[0] + importances_[1] + importances_[2];
    if (sum > 0.0)
      for (double& v : importances_) v /= sum;
  }

  double predict_proba(const std::array<double, 3>& x) const override {
    double acc = 0.0;
    for (const auto& t : trees_) acc += t.predict(x);
    return trees_.empty() ? 0.0 : acc / static_cast<double>(trees_.size());
  }

  std::optional<std::array<double, 3>> feature_importances() const override {
    return importances_;
  }

private:
  std::vector<std::vector<Sample>> boots_;
  std::vector<Cart> trees_;
  std::array<double, 3> importances_{};
};

// --- One-hidden-layer MLP -------------------------------------------------------

class MlpModel : public Model {
public:
  MlpModel(const std::vector<FeatureRow>& rows, const ModelHyper& hyper, std::uint64_t seed)
      : hidden_(hyper.mlp_hidden) {
    std::mt19937_64 rng(seed);
    auto glorot = [&rng](int fan_in, int fan_out) {
      const double r = std::sqrt(6.0 / (fan_in + fan_out));
      std::uniform_real_distribution<double> dist(-r, r);
      return [&rng, dist]() mutable { return dist(rng); };
    };
    auto init_h = glorot(kNumFeatures, hidden_);
    w1_.resize(hidden_ * kNumFeatures);
    b1_.assign(hidden_, 0.0);
    for (auto& w : w1_) w = init_h();
    auto init_o = glorot(hidden_, 1);
    w2_.resize(hidden_);
    for (auto& w : w2_) w = init_o();

    const double n = static_cast<double>(rows.size());
    std::vector<double> h(hidden_), grad_w2(hidden_), grad_b1(hidden_);
    std::vector<double> grad_w1(hidden_ * kNumFeatures);
    for (int epoch = 0; epoch < hyper.mlp_epochs; ++epoch) {
      std::fill(grad_w1.begin(), grad_w1.end(), 0.0);
      std::fill(grad_w2.begin(), grad_w2.end(), 0.0);
      std::fill(grad_b1.begin(), grad_b1.end(), 0.0);
      double grad_b2 = 0.0;
      for (const auto& row : rows) {
        const auto x = row.features();
        forward(x, h);
        double z = b2_;
        for (int u = 0; u < hidden_; ++u) z += w2_[u] * h[u];
        const double err = sigmoid(z) - (row.label ? 1.0 : 0.0);
        grad_b2 += err;
        for (int u = 0; u < hidden_; ++u) {
          grad_w2[u] += err * h[u];
          if (h[u] > 0.0) {
            const double delta = err * w2_[u];
            grad_b1[u] += delta;
            for (int f = 0; f < kNumFeatures; ++f) grad_w1[u * kNumFeatures + f] += delta * x[f];
          }
        }
      }
      const double step = hyper.mlp_learning_rate / n;
      for (int u = 0; u < hidden_; ++u) {
        w2_[u] -= step * grad_w2[u];
        b1_[u] -= step * grad_b1[u];
        for (int f = 0; f < kNumFeatures; ++f)
          w1_[u * kNumFeatures + f] -= step * grad_w1[u * kNumFeatures + f];
      }
      b2_ -= step * grad_b2;
    }
  }

  double predict_proba(const std::array<double, 3>& x) const override {
    std::vector<double> h(hidden_);
    forward(x, h);
    double z = b2_;
    for (int u = 0; u < hidden_; ++u) z += w2_[u] * h[u];
    return sigmoid(z);
  }

private:
  void forward(const std::array<double, 3>& x, std::vector<double>& h) const {
    for (int u = 0; u < hidden_; ++u) {
      double z = b1_[u];
      for (int f = 0; f < kNumFeatures; ++f) z += w1_[u * kNumFeatures + f] * x[f];
      h[u] = z > 0.0 ? z : 0.0;
    }
  }

  int hidden_;
  std::vector<double> w1_, b1_, w2_;
  double b2_ = 0.0;
};

}  // namespace

std::unique_ptr<Model> train_model(ModelKind kind, const std::vector<FeatureRow>& rows,
                                   const ModelHyper& hyper, std::uint64_t seed) {
  if (rows.empty()) throw Error(Errc::EmptyCorpus, "no training rows");
  check_finite(rows);
  switch (kind) {
    case ModelKind::lr: return std::make_unique<LogisticModel>(rows, hyper);
    case ModelKind::dt: return std::make_unique<TreeModel>(rows, hyper);
    case ModelKind::rf: return std::make_unique<ForestModel>(rows, hyper, seed);
    case ModelKind::mlp: return std::make_unique<MlpModel>(rows, hyper, seed);
  }
  throw Error(Errc::ConfigError, "unknown model kind");
}

RankedList predict_rank(const Model& model, const std::string& bug_id,
                        const std::vector<FeatureRow>& rows) {
  std::vector<double> scores(rows.size());
  for (size_t i = 0; i < rows.size(); ++i) scores[i] = model.predict_proba(rows[i].features());
  return make_ranked_list(bug_id, rows, scores);
}

}  // namespace irbl
