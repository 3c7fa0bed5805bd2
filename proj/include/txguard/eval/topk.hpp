#pragma once

#include <iosfwd>
#include <span>
#include <vector>

namespace txguard::eval {

struct CurvePoint {
  double fpr = 0.0;
  double tpr = 0.0;
  int rank = 0;  // last rank covered by this point

  bool operator==(const CurvePoint&) const = default;
};

// ROC sweep over the k highest-scored items (stable order on ties, by
// input position). labels_topk[i] labels the item at rank i+1. Rates use
// only the top-k positives/negatives as denominators; equal scores form
// one point. A rate whose denominator is zero stays 0.
// Throws ValidationError when k < 1, k > scores.size() or
// labels_topk.size() != k.
std::vector<CurvePoint> topk_curve(std::span<const double> scores, std::span<const int> labels_topk, int k);

// Indices of the k highest scores in the order topk_curve ranks them.
std::vector<std::size_t> topk_order(std::span<const double> scores, int k);

// curve.csv: fpr,tpr,rank
void write_curve_csv(std::ostream& out, std::span<const CurvePoint> curve);

}  // namespace txguard::eval
