#include "txguard/eval/ablation.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "txguard/model/artifact.hpp"
#include "txguard/util/error.hpp"
#include "txguard/util/hash.hpp"

namespace txguard::eval {

using features::Family;

std::string Combo::name() const {
  std::string out;
  for (Family f : {Family::kEts, Family::kSt, Family::kTrx}) {
    if (!families.count(f)) continue;
    if (!out.empty()) out += '+';
    out += features::to_string(f);
  }
  if (reciprocity) out += " + reciprocity";
  return out;
}

Combo parse_combo(std::string_view text, bool reciprocity) {
  Combo c;
  c.reciprocity = reciprocity;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('+', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view part = text.substr(start, end - start);
    while (!part.empty() && part.front() == ' ') part.remove_prefix(1);
    while (!part.empty() && part.back() == ' ') part.remove_suffix(1);
    if (part.empty()) throw ValidationError("empty feature family in combo '" + std::string(text) + "'");
    c.families.insert(features::parse_family(part));
    start = end + 1;
  }
  return c;
}

std::vector<Combo> all_family_combos() {
  const Family e = Family::kEts, s = Family::kSt, t = Family::kTrx;
  return {{{e}}, {{s}}, {{t}}, {{e, s}}, {{s, t}}, {{e, t}}, {{e, s, t}}};
}

std::vector<Combo> default_combos() {
  auto combos = all_family_combos();
  combos.push_back({{Family::kEts, Family::kSt, Family::kTrx}, true});
  return combos;
}

namespace {

MetricStats summarize(const std::vector<double>& values) {
  MetricStats s;
  s.n = static_cast<int>(values.size());
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / s.n;
  if (s.n > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / (s.n - 1));
  }
  return s;
}

nlohmann::json stats_json(const MetricStats& s) {
  if (s.n == 0) return {{"mean", nullptr}, {"std", nullptr}, {"n", 0}};
  return {{"mean", s.mean}, {"std", s.std}, {"n", s.n}};
}

}  // namespace

nlohmann::json AblationRow::to_json() const {
  nlohmann::json families = nlohmann::json::array();
  for (Family f : combo.families) families.push_back(features::to_string(f));
  nlohmann::json repeats = nlohmann::json::array();
  for (const auto& r : per_repeat) repeats.push_back(r.to_json());
  return {{"name", combo.name()},
          {"feature_sets", families},
          {"reciprocity", combo.reciprocity},
          {"metrics",
           {{"precision", stats_json(precision)},
            {"recall", stats_json(recall)},
            {"f1", stats_json(f1)},
            {"auc_pr", stats_json(auc_pr)},
            {"roc_auc", stats_json(roc_auc)}}},
          {"per_repeat", repeats}};
}

std::vector<AblationRow> run_ablation(std::span<const features::RelationshipFeatures> rows,
                                      std::span<const LabeledRelationship> labels, const features::FeatureLayout& layout,
                                      const model::FoldPlan& plan, std::span<const Combo> combos,
                                      const AblationConfig& config) {
  std::map<RelationshipKey, int> by_key;
  for (const auto& l : labels) by_key[l.key] = l.label;
  std::vector<int> y;
  y.reserve(rows.size());
  for (const auto& row : rows) {
    if (row.layout_id != layout.layout_id()) throw LayoutMismatchError(layout.layout_id(), row.layout_id);
    auto it = by_key.find(row.key);
    if (it == by_key.end()) throw ValidationError("no label for relationship " + row.key.id());
    y.push_back(it->second);
  }

  std::vector<AblationRow> out;
  for (const Combo& combo : combos) {
    const auto columns = layout.select(combo.families, combo.reciprocity);
    const std::vector<double> x = model::gather_columns(rows, columns);
    const std::size_t p = columns.size();

    AblationRow row;
    row.combo = combo;
    std::vector<double> prec, rec, f1, aucpr, roc;
    for (int r = 0; r < plan.repeats; ++r) {
      std::vector<double> oof(rows.size(), 0.0);
      std::vector<int> fold(rows.size());
      for (std::size_t i = 0; i < rows.size(); ++i) fold[i] = plan.fold_of(rows[i].key, r);
      for (int f = 0; f < plan.k; ++f) {
        std::vector<double> train_x, test_x;
        std::vector<int> train_y;
        std::vector<std::size_t> test_idx;
        for (std::size_t i = 0; i < rows.size(); ++i) {
          auto& dst = fold[i] == f ? test_x : train_x;
          dst.insert(dst.end(), x.begin() + static_cast<std::ptrdiff_t>(i * p),
                     x.begin() + static_cast<std::ptrdiff_t>((i + 1) * p));
          if (fold[i] == f)
            test_idx.push_back(i);
          else
            train_y.push_back(y[i]);
        }
        if (test_idx.empty()) continue;
        model::ForestConfig fc = config.forest;
        fc.seed = util::mix64(config.forest.seed ^ util::mix64((static_cast<std::uint64_t>(r) << 32) | static_cast<std::uint64_t>(f)));
        const auto forest = model::Forest::train(model::MatrixView{train_x, train_y.size(), p}, train_y, fc);
        const auto s = forest.predict(model::MatrixView{test_x, test_idx.size(), p});
        for (std::size_t t = 0; t < test_idx.size(); ++t) oof[test_idx[t]] = s[t];
      }
      MetricReport m = compute_metrics(oof, y, config.threshold);
      prec.push_back(m.precision);
      rec.push_back(m.recall);
      f1.push_back(m.f1);
      if (m.auc_pr) aucpr.push_back(*m.auc_pr);
      if (m.roc_auc) roc.push_back(*m.roc_auc);
      row.per_repeat.push_back(m);
      row.oof_scores.push_back(std::move(oof));
    }
    row.precision = summarize(prec);
    row.recall = summarize(rec);
    row.f1 = summarize(f1);
    row.auc_pr = summarize(aucpr);
    row.roc_auc = summarize(roc);
    out.push_back(std::move(row));
  }
  return out;
}

std::string format_table(std::span<const AblationRow> rows) {
  auto cell = [](const MetricStats& s) {
    if (s.n == 0) return std::string("n/a");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f (%.3f)", s.mean, s.std);
    return std::string(buf);
  };
  std::vector<std::array<std::string, 6>> lines;
  lines.push_back({"Features", "Prec", "Rec", "F1", "AUC-PR", "ROC AUC"});
  for (const auto& r : rows)
    lines.push_back({r.combo.name(), cell(r.precision), cell(r.recall), cell(r.f1), cell(r.auc_pr), cell(r.roc_auc)});
  std::array<std::size_t, 6> width{};
  for (const auto& l : lines)
    for (std::size_t c = 0; c < 6; ++c) width[c] = std::max(width[c], l[c].size());
  std::ostringstream out;
  auto emit = [&](const std::array<std::string, 6>& l) {
    for (std::size_t c = 0; c < 6; ++c) {
      out << l[c];
      if (c + 1 < 6) out << std::string(width[c] - l[c].size() + 2, ' ');
    }
    out << '\n';
  };
  emit(lines[0]);
  std::size_t total = 0;
  for (std::size_t c = 0; c < 6; ++c) total += width[c] + (c + 1 < 6 ? 2 : 0);
  out << std::string(total, '-') << '\n';
  for (std::size_t i = 1; i < lines.size(); ++i) emit(lines[i]);
  return out.str();
}

nlohmann::json ablation_json(std::span<const AblationRow> rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : rows) out.push_back(r.to_json());
  return out;
}

}  // namespace txguard::eval
