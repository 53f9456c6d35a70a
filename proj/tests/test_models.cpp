#include <doctest.h>

#include <cmath>
#include <random>

#include "irbl/composer.hpp"
#include "irbl/errors.hpp"

using namespace irbl;

namespace {

FeatureRow row(const std::string& path, double r, double h, double s, bool label) {
  return FeatureRow{path, r, h, s, label};
}

// Perfectly separable on the first feature, constant elsewhere.
std::vector<FeatureRow> separable_rows(int n_per_class) {
  std::vector<FeatureRow> rows;
  for (int i = 0; i < n_per_class; ++i) {
    rows.push_back(row("pos" + std::to_string(i), 0.8 + 0.01 * i, 0.5, 0.5, true));
    rows.push_back(row("neg" + std::to_string(i), 0.1 + 0.01 * i, 0.5, 0.5, false));
  }
  return rows;
}

}  // namespace

TEST_CASE("logistic regression separates separable data") {
  const auto rows = separable_rows(10);
  const auto model = train_model(ModelKind::lr, rows, ModelHyper{}, 0);
  double min_pos = 1.0, max_neg = 0.0;
  for (const auto& r : rows) {
    const double p = model->predict_proba(r.features());
    if (r.label) min_pos = std::min(min_pos, p);
    else max_neg = std::max(max_neg, p);
  }
  CHECK(min_pos > max_neg);
  CHECK_FALSE(model->feature_importances().has_value());
}

TEST_CASE("decision tree on constant features is a single leaf at the prior") {
  std::vector<FeatureRow> rows;
  for (int i = 0; i < 6; ++i) rows.push_back(row("p" + std::to_string(i), 0.5, 0.5, 0.5, true));
  for (int i = 0; i < 10; ++i) rows.push_back(row("n" + std::to_string(i), 0.5, 0.5, 0.5, false));
  const auto model = train_model(ModelKind::dt, rows, ModelHyper{}, 0);
  const double prior = 6.0 / 16.0;
  CHECK(model->predict_proba({0.5, 0.5, 0.5}) == doctest::Approx(prior).epsilon(1e-15));
  CHECK(model->predict_proba({9.0, -3.0, 0.0}) == doctest::Approx(prior).epsilon(1e-15));
}

TEST_CASE("decision tree splits on the informative feature") {
  std::vector<FeatureRow> rows;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> noise(0.0, 1.0);
  for (int i = 0; i < 40; ++i) {
    const bool label = i % 2 == 0;
    rows.push_back(row("r" + std::to_string(i), noise(rng), label ? 0.9 : 0.1, noise(rng), label));
  }
  const auto model = train_model(ModelKind::dt, rows, ModelHyper{}, 0);
  const auto imp = model->feature_importances();
  REQUIRE(imp.has_value());
  // susp_h (index 1) carries all the signal
  CHECK((*imp)[1] > 0.9);
  CHECK((*imp)[0] + (*imp)[1] + (*imp)[2] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(model->predict_proba({0.5, 0.9, 0.5}) > model->predict_proba({0.5, 0.1, 0.5}));
}

TEST_CASE("decision tree honors min leaf size") {
  // 8 samples with min_leaf 5 cannot split
  std::vector<FeatureRow> rows;
  for (int i = 0; i < 8; ++i)
    rows.push_back(row("r" + std::to_string(i), i / 8.0, 0, 0, i >= 4));
  const auto model = train_model(ModelKind::dt, rows, ModelHyper{}, 0);
  CHECK(model->predict_proba({0.0, 0, 0}) == doctest::Approx(0.5));
  CHECK(model->predict_proba({1.0, 0, 0}) == doctest::Approx(0.5));
}

TEST_CASE("random forest is deterministic under a fixed seed") {
  const auto rows = separable_rows(20);
  const auto a = train_model(ModelKind::rf, rows, ModelHyper{}, 1234);
  const auto b = train_model(ModelKind::rf, rows, ModelHyper{}, 1234);
  const auto c = train_model(ModelKind::rf, rows, ModelHyper{}, 99);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> val(0.0, 1.0);
  bool any_differs_from_c = false;
  for (int i = 0; i < 50; ++i) {
    const std::array<double, 3> x = {val(rng), val(rng), val(rng)};
    const double pa = a->predict_proba(x);
    CHECK(pa == b->predict_proba(x));  // bit-identical
    if (pa != c->predict_proba(x)) any_differs_from_c = true;
  }
  CHECK(any_differs_from_c);
  CHECK(a->feature_importances().has_value());
}

TEST_CASE("random forest ranks separable data correctly") {
  const auto rows = separable_rows(20);
  const auto model = train_model(ModelKind::rf, rows, ModelHyper{}, 7);
  CHECK(model->predict_proba({0.9, 0.5, 0.5}) > model->predict_proba({0.1, 0.5, 0.5}));
}

TEST_CASE("mlp fits separable data and stays in [0,1]") {
  const auto rows = separable_rows(15);
  const auto model = train_model(ModelKind::mlp, rows, ModelHyper{}, 21);
  double min_pos = 1.0, max_neg = 0.0;
  for (const auto& r : rows) {
    const double p = model->predict_proba(r.features());
    CHECK(p >= 0.0);
    CHECK(p <= 1.0);
    if (r.label) min_pos = std::min(min_pos, p);
    else max_neg = std::max(max_neg, p);
  }
  CHECK(min_pos > max_neg);
  // same-seed determinism
  const auto again = train_model(ModelKind::mlp, rows, ModelHyper{}, 21);
  CHECK(again->predict_proba({0.4, 0.5, 0.5}) == model->predict_proba({0.4, 0.5, 0.5}));
}

TEST_CASE("non-finite features are rejected") {
  std::vector<FeatureRow> rows = separable_rows(5);
  rows[0].susp_s = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(train_model(ModelKind::lr, rows, ModelHyper{}, 0), Error);
  rows[0].susp_s = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(train_model(ModelKind::dt, rows, ModelHyper{}, 0), Error);
}

TEST_CASE("predict_rank orders by probability with the path tie-break") {
  const auto rows = separable_rows(10);
  const auto model = train_model(ModelKind::lr, rows, ModelHyper{}, 0);
  const auto ranked = predict_rank(*model, "B-1", rows);
  REQUIRE(ranked.candidates.size() == rows.size());
  CHECK(ranked.bug_id == "B-1");
  for (size_t i = 1; i < ranked.candidates.size(); ++i) {
    CHECK(ranked.candidates[i - 1].second >= ranked.candidates[i].second);
  }
  // positives occupy the top half
  for (size_t i = 0; i < 10; ++i)
    CHECK(ranked.candidates[i].first.substr(0, 3) == "pos");

  // identical probabilities fall back to path order
  std::vector<FeatureRow> flat = {row("b", 0.5, 0.5, 0.5, false), row("a", 0.5, 0.5, 0.5, true),
                                  row("c", 0.5, 0.5, 0.5, false)};
  const auto tie = predict_rank(*model, "B-2", flat);
  CHECK(tie.candidates[0].first == "a");
  CHECK(tie.candidates[1].first == "b");
  CHECK(tie.candidates[2].first == "c");
}
