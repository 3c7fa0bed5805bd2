#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "helpers.hpp"
#include "txguard/eval/ablation.hpp"
#include "txguard/eval/metrics.hpp"
#include "txguard/eval/topk.hpp"
#include "txguard/util/error.hpp"

using namespace txguard;
using namespace txguard::eval;

TEST_SUITE("evaluate") {
  TEST_CASE("hand example") {
    std::vector<double> s = {0.9, 0.8, 0.3, 0.1};
    std::vector<int> y = {1, 0, 1, 0};
    auto m = compute_metrics(s, y, 0.5);
    CHECK(m.precision == 0.5);
    CHECK(m.recall == 0.5);
    CHECK(m.f1 == 0.5);
    CHECK(*m.roc_auc == 0.75);
    // Thresholds 0.9, 0.8, 0.3, 0.1: (R,P) = (.5,1), (.5,.5), (1,2/3), (1,.5).
    CHECK(*m.auc_pr == doctest::Approx(0.5 * 1.0 + 0.5 * (2.0 / 3.0)));
    CHECK(m.n_pos == 2);
    CHECK(m.n_neg == 2);
    CHECK(m.threshold == 0.5);
  }

  TEST_CASE("perfect and all-tied rankings") {
    auto p = compute_metrics(std::vector<double>{0.9, 0.7, 0.2, 0.1}, std::vector<int>{1, 1, 0, 0}, 0.5);
    CHECK(*p.roc_auc == 1.0);
    CHECK(*p.auc_pr == 1.0);
    CHECK(p.f1 == 1.0);
    auto t = compute_metrics(std::vector<double>(6, 0.5), std::vector<int>{1, 0, 1, 0, 1, 0}, 0.5);
    CHECK(*t.roc_auc == 0.5);
    CHECK(*t.auc_pr == 0.5);
  }

  TEST_CASE("single class: AUCs undefined, P/R/F1 still computed") {
    auto m = compute_metrics(std::vector<double>{0.9, 0.2}, std::vector<int>{1, 1}, 0.5);
    CHECK_FALSE(m.roc_auc.has_value());
    CHECK_FALSE(m.auc_pr.has_value());
    CHECK(m.precision == 1.0);
    CHECK(m.recall == 0.5);
    CHECK(m.to_json()["roc_auc"].is_null());
    auto none = compute_metrics(std::vector<double>{0.1}, std::vector<int>{0}, 0.5);
    CHECK(none.precision == 0.0);
    CHECK(none.recall == 0.0);
    CHECK(none.f1 == 0.0);
  }

  TEST_CASE("input errors") {
    CHECK_THROWS_AS(compute_metrics(std::vector<double>{0.1}, std::vector<int>{1, 0}), ValidationError);
    CHECK_THROWS_AS(compute_metrics(std::vector<double>{0.1}, std::vector<int>{2}), ValidationError);
  }

  TEST_CASE("f1 is the harmonic mean") {
    std::mt19937 rng(2);
    for (int i = 0; i < 200; ++i) {
      std::vector<double> s(12);
      std::vector<int> y(12);
      for (std::size_t j = 0; j < 12; ++j) {
        s[j] = (rng() % 10) / 10.0;
        y[j] = static_cast<int>(rng() % 2);
      }
      auto m = compute_metrics(s, y, 0.5);
      if (m.precision > 0 && m.recall > 0)
        CHECK(m.f1 == doctest::Approx(2 * m.precision * m.recall / (m.precision + m.recall)).epsilon(1e-12));
    }
  }

  TEST_CASE("topk: alternating labels") {
    std::vector<double> s = {0.9, 0.8, 0.7, 0.6};
    auto c = topk_curve(s, std::vector<int>{1, 0, 1, 0}, 4);
    REQUIRE(c.size() == 4);
    CHECK(c[0] == CurvePoint{0.0, 0.5, 1});
    CHECK(c[1] == CurvePoint{0.5, 0.5, 2});
    CHECK(c[2] == CurvePoint{0.5, 1.0, 3});
    CHECK(c[3] == CurvePoint{1.0, 1.0, 4});
  }

  TEST_CASE("topk: all positive is a vertical segment") {
    std::vector<double> s = {0.9, 0.8, 0.7, 0.1};
    auto c = topk_curve(s, std::vector<int>{1, 1, 1}, 3);
    for (const auto& p : c) CHECK(p.fpr == 0.0);
    CHECK(c.back().tpr == 1.0);
  }

  TEST_CASE("topk: ties grouped, ordering from scores, errors") {
    std::vector<double> s = {0.2, 0.9, 0.9, 0.5, 0.1};
    auto order = topk_order(s, 3);
    CHECK(order == std::vector<std::size_t>{1, 2, 3});
    auto c = topk_curve(s, std::vector<int>{1, 0, 1}, 3);
    REQUIRE(c.size() == 2);
    CHECK(c[0] == CurvePoint{1.0, 0.5, 2});
    CHECK(c[1] == CurvePoint{1.0, 1.0, 3});
    CHECK_THROWS_AS(topk_curve(s, std::vector<int>(6, 1), 6), ValidationError);
    CHECK_THROWS_AS(topk_curve(s, std::vector<int>{1, 0}, 3), ValidationError);
    CHECK_THROWS_AS(topk_curve(s, std::vector<int>{}, 0), ValidationError);
    std::ostringstream out;
    write_curve_csv(out, c);
    CHECK(out.str() == "fpr,tpr,rank\n1,0.5,2\n1,1,3\n");
  }

  TEST_CASE("topk: monotone, ends at (1,1)") {
    std::mt19937 rng(8);
    for (int i = 0; i < 100; ++i) {
      std::vector<double> s(30);
      for (auto& v : s) v = (rng() % 15) / 15.0;
      std::vector<int> l(20);
      for (auto& v : l) v = static_cast<int>(rng() % 2);
      l[0] = 1;
      l[1] = 0;
      auto c = topk_curve(s, l, 20);
      for (std::size_t j = 1; j < c.size(); ++j) {
        CHECK(c[j].fpr >= c[j - 1].fpr);
        CHECK(c[j].tpr >= c[j - 1].tpr);
      }
      CHECK(c.back().fpr == 1.0);
      CHECK(c.back().tpr == 1.0);
    }
  }

  TEST_CASE("combos") {
    CHECK(parse_combo("ETS+ST").name() == "ETS+ST");
    CHECK(parse_combo("TRX + ETS", true).name() == "ETS+TRX + reciprocity");
    CHECK_THROWS_AS(parse_combo("ETS+FOO"), ValidationError);
    CHECK_THROWS_AS(parse_combo(""), ValidationError);
    auto all = all_family_combos();
    REQUIRE(all.size() == 7);
    std::vector<std::string> names;
    for (const auto& c : all) names.push_back(c.name());
    CHECK(names == std::vector<std::string>{"ETS", "ST", "TRX", "ETS+ST", "ST+TRX", "ETS+TRX", "ETS+ST+TRX"});
    auto d = default_combos();
    CHECK(d.size() == 8);
    CHECK(d.back().reciprocity);
  }

  TEST_CASE("ablation: signal planted in ETS columns only") {
    const auto layout = features::FeatureLayout::relationship_layout();
    const auto ets_cols = layout.select({features::Family::kEts}, false);
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> noise(0, 1);
    std::vector<features::RelationshipFeatures> rows;
    std::vector<LabeledRelationship> labels;
    for (int i = 0; i < 80; ++i) {
      features::RelationshipFeatures r;
      r.key = {"a" + std::to_string(i), "b" + std::to_string(i)};
      r.layout_id = layout.layout_id();
      r.values.resize(layout.size());
      for (auto& v : r.values) v = noise(rng);
      const int y = i % 4 == 0;
      for (std::size_t c : ets_cols) r.values[c] += y ? 0.8 : 0.0;
      rows.push_back(r);
      labels.push_back({r.key, testing::feb2022(), y, LabelSource::kSynthetic});
    }
    std::vector<RelationshipKey> keys;
    for (const auto& r : rows) keys.push_back(r.key);
    auto plan = model::make_fold_plan(keys, 4, 2, 5);
    AblationConfig cfg;
    cfg.forest.n_trees = 50;
    std::vector<Combo> combos = {parse_combo("ETS"), parse_combo("TRX")};
    auto res = run_ablation(rows, labels, layout, plan, combos, cfg);
    REQUIRE(res.size() == 2);
    CHECK(res[0].roc_auc.mean > res[1].roc_auc.mean);
    CHECK(res[0].roc_auc.n == 2);
    // Out-of-fold scores cover every row once per repeat.
    for (const auto& oof : res[0].oof_scores) CHECK(oof.size() == rows.size());

    auto table = format_table(res);
    CHECK(table.find("Features") != std::string::npos);
    CHECK(table.find("AUC-PR") != std::string::npos);
    auto j = ablation_json(res);
    CHECK(j.size() == 2);
    CHECK(j[0]["metrics"]["roc_auc"]["mean"].get<double>() == res[0].roc_auc.mean);
    CHECK(j[1]["feature_sets"] == nlohmann::json::array({"TRX"}));

    // Same inputs, same numbers.
    auto again = run_ablation(rows, labels, layout, plan, combos, cfg);
    CHECK(ablation_json(again).dump() == j.dump());
  }
}
