#include "txguard/eval/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include "txguard/util/error.hpp"

namespace txguard::eval {

nlohmann::json MetricReport::to_json() const {
  auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
  return {{"precision", precision}, {"recall", recall}, {"f1", f1},        {"auc_pr", opt(auc_pr)},
          {"roc_auc", opt(roc_auc)}, {"n_pos", n_pos},   {"n_neg", n_neg}, {"threshold", threshold}};
}

MetricReport compute_metrics(std::span<const double> scores, std::span<const int> labels, double threshold) {
  if (scores.size() != labels.size()) throw ValidationError("scores and labels differ in length");
  MetricReport r;
  r.threshold = threshold;
  int tp = 0, fp = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] != 0 && labels[i] != 1) throw ValidationError("labels must be 0 or 1");
    (labels[i] ? r.n_pos : r.n_neg)++;
    if (scores[i] >= threshold) (labels[i] ? tp : fp)++;
  }
  r.precision = tp + fp > 0 ? static_cast<double>(tp) / (tp + fp) : 0.0;
  r.recall = r.n_pos > 0 ? static_cast<double>(tp) / r.n_pos : 0.0;
  r.f1 = r.precision + r.recall > 0 ? 2.0 * r.precision * r.recall / (r.precision + r.recall) : 0.0;
  if (r.n_pos == 0 || r.n_neg == 0) return r;

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  // One pass over tie groups, descending. Midrank of a group occupying
  // descending positions [i, j) is n - (i + j - 1) / 2 in ascending terms.
  const double n = static_cast<double>(scores.size());
  double pos_rank_sum = 0.0;
  double ap = 0.0, prev_recall = 0.0;
  int cum_tp = 0, cum_fp = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    int group_pos = 0;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) group_pos += labels[order[j++]];
    const double midrank = n - static_cast<double>(i + j - 1) / 2.0;
    pos_rank_sum += midrank * group_pos;
    cum_tp += group_pos;
    cum_fp += static_cast<int>(j - i) - group_pos;
    const double rec = static_cast<double>(cum_tp) / r.n_pos;
    ap += (rec - prev_recall) * (static_cast<double>(cum_tp) / (cum_tp + cum_fp));
    prev_recall = rec;
    i = j;
  }
  const double np = r.n_pos, nn = r.n_neg;
  r.roc_auc = (pos_rank_sum - np * (np + 1) / 2.0) / (np * nn);
  r.auc_pr = ap;
  return r;
}

}  // namespace txguard::eval
