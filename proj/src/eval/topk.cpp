#include "txguard/eval/topk.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <string>

#include "txguard/util/csv.hpp"
#include "txguard/util/error.hpp"

namespace txguard::eval {

std::vector<std::size_t> topk_order(std::span<const double> scores, int k) {
  if (k < 1) throw ValidationError("k must be at least 1");
  if (static_cast<std::size_t>(k) > scores.size())
    throw ValidationError("k = " + std::to_string(k) + " exceeds the " + std::to_string(scores.size()) + " available scores");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  order.resize(static_cast<std::size_t>(k));
  return order;
}

std::vector<CurvePoint> topk_curve(std::span<const double> scores, std::span<const int> labels_topk, int k) {
  const auto order = topk_order(scores, k);
  if (labels_topk.size() != static_cast<std::size_t>(k)) throw ValidationError("labels_topk must hold exactly k labels");
  int pos = 0;
  for (int l : labels_topk) {
    if (l != 0 && l != 1) throw ValidationError("labels must be 0 or 1");
    pos += l;
  }
  const int neg = k - pos;
  std::vector<CurvePoint> curve;
  int tp = 0, fp = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) (labels_topk[j++] ? tp : fp)++;
    curve.push_back({neg > 0 ? static_cast<double>(fp) / neg : 0.0, pos > 0 ? static_cast<double>(tp) / pos : 0.0,
                     static_cast<int>(j)});
    i = j;
  }
  return curve;
}

void write_curve_csv(std::ostream& out, std::span<const CurvePoint> curve) {
  out << "fpr,tpr,rank\n";
  for (const auto& p : curve) out << util::format_double(p.fpr) << ',' << util::format_double(p.tpr) << ',' << p.rank << '\n';
}

}  // namespace txguard::eval
