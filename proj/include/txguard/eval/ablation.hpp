#pragma once

#include <iosfwd>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "txguard/core/transaction.hpp"
#include "txguard/eval/metrics.hpp"
#include "txguard/features/aggregate.hpp"
#include "txguard/features/layout.hpp"
#include "txguard/model/folds.hpp"
#include "txguard/model/forest.hpp"

namespace txguard::eval {

struct Combo {
  std::set<features::Family> families;
  bool reciprocity = false;

  std::string name() const;  // e.g. "ETS+ST+TRX", with " + reciprocity" appended
};

// "ETS+ST" style. Throws ValidationError on an unknown or empty family list.
Combo parse_combo(std::string_view text, bool reciprocity = false);

// The seven family combinations in table order, forward-only.
std::vector<Combo> all_family_combos();
// all_family_combos() followed by ETS+ST+TRX with reciprocity.
std::vector<Combo> default_combos();

struct MetricStats {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation over repeats (0 for one repeat)
  int n = 0;         // repeats contributing (AUC values are skipped when undefined)
};

struct AblationRow {
  Combo combo;
  MetricStats precision, recall, f1, auc_pr, roc_auc;
  std::vector<MetricReport> per_repeat;
  // Pooled out-of-fold scores per repeat, aligned with the input rows.
  std::vector<std::vector<double>> oof_scores;

  nlohmann::json to_json() const;
};

struct AblationConfig {
  model::ForestConfig forest;
  double threshold = kDefaultThreshold;
};

// For each combo and repeat: train on k-1 folds, score the held-out fold,
// pool the out-of-fold scores, compute metrics; then average over repeats.
// `labels` must cover every row. Throws ValidationError when a training
// split holds a single class.
std::vector<AblationRow> run_ablation(std::span<const features::RelationshipFeatures> rows,
                                      std::span<const LabeledRelationship> labels, const features::FeatureLayout& layout,
                                      const model::FoldPlan& plan, std::span<const Combo> combos,
                                      const AblationConfig& config);

// Aligned text table: Features | Prec | Rec | F1 | AUC-PR | ROC AUC, each
// cell "mean (std)".
std::string format_table(std::span<const AblationRow> rows);

nlohmann::json ablation_json(std::span<const AblationRow> rows);

}  // namespace txguard::eval
