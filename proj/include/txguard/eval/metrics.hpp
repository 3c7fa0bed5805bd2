#pragma once

#include <optional>
#include <span>

#include <json.hpp>

namespace txguard::eval {

struct MetricReport {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::optional<double> auc_pr;   // empty when only one class is present
  std::optional<double> roc_auc;  // empty when only one class is present
  int n_pos = 0;
  int n_neg = 0;
  double threshold = 0.5;

  nlohmann::json to_json() const;
};

inline constexpr double kDefaultThreshold = 0.5;

// score >= threshold predicts positive. Precision is 0 when nothing is
// predicted positive, recall is 0 when there are no positives.
// ROC AUC: Mann-Whitney statistic via midranks (ties count 1/2).
// AUC-PR: step integration sum_k (R_k - R_{k-1}) * P_k over distinct
// score thresholds, descending.
// Throws ValidationError on length mismatch or labels outside {0,1}.
MetricReport compute_metrics(std::span<const double> scores, std::span<const int> labels,
                             double threshold = kDefaultThreshold);

}  // namespace txguard::eval
