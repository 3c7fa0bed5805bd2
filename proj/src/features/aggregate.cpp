#include "txguard/features/aggregate.hpp"

#include <algorithm>
#include <cstdlib>

#include "txguard/kernels/kernels.hpp"
#include "txguard/util/error.hpp"

namespace txguard::features {

namespace {

// Per-transaction row; column groups are contiguous so each aggregation is
// one strided kernel call.
constexpr std::size_t kSentimentCol = 0;   // 4, max
constexpr std::size_t kSumCol = 4;         // toxicity (7) then the mean group (15)
constexpr std::size_t kToxicityCount = 7;
constexpr std::size_t kMeanCount = 15;     // emotion 7, amount, 4 counts, 3 flags
constexpr std::size_t kShapeCol = 26;      // 4, min/max/median
constexpr std::size_t kShapeCount = 4;
constexpr std::size_t kRowWidth = 30;

std::array<double, kRowWidth> to_row(const TransactionFeatures& t) {
  std::array<double, kRowWidth> row{};
  const auto s = t.ets.sentiment.as_array();
  std::copy(s.begin(), s.end(), row.begin() + kSentimentCol);
  std::copy(t.ets.toxicity.values.begin(), t.ets.toxicity.values.end(), row.begin() + kSumCol);
  std::size_t c = kSumCol + kToxicityCount;
  for (double e : t.ets.emotion.values) row[c++] = e;
  row[c++] = static_cast<double>(t.amount_cents);
  row[c++] = t.st.n_lower_words;
  row[c++] = t.st.n_upper_words;
  row[c++] = t.st.n_mixed_words;
  row[c++] = t.st.n_punctuation;
  row[c++] = t.st.has_special_chars ? 1.0 : 0.0;
  row[c++] = t.st.has_digits ? 1.0 : 0.0;
  row[c++] = t.st.is_empty ? 1.0 : 0.0;
  row[kShapeCol + 0] = t.st.desc_length;
  row[kShapeCol + 1] = t.st.n_words;
  row[kShapeCol + 2] = t.st.longest_word_len;
  row[kShapeCol + 3] = t.st.word_break_proportion;
  return row;
}

double median_of(std::vector<double>& values) {
  const std::size_t n = values.size();
  std::sort(values.begin(), values.end());
  if (n % 2 == 1) return values[n / 2];
  return (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

std::array<BlockColumn, kBlockWidth> make_block_columns() {
  std::array<BlockColumn, kBlockWidth> cols{};
  std::size_t i = 0;
  static const char* const kSentiment[] = {"sent_positive_max", "sent_negative_max", "sent_neutral_max",
                                           "sent_compound_max"};
  for (const char* n : kSentiment) cols[i++] = {n, Family::kEts};
  static const char* const kShape[] = {
      "desc_length_min",      "desc_length_max",      "desc_length_median",      "n_words_min",
      "n_words_max",          "n_words_median",       "longest_word_len_min",    "longest_word_len_max",
      "longest_word_len_median", "word_break_proportion_min", "word_break_proportion_max",
      "word_break_proportion_median"};
  for (const char* n : kShape) cols[i++] = {n, Family::kSt};
  static const char* const kToxicity[] = {"tox_toxicity_sum", "tox_severe_toxicity_sum", "tox_obscene_sum",
                                          "tox_threat_sum",   "tox_insult_sum",          "tox_identity_attack_sum",
                                          "tox_sexual_explicit_sum"};
  for (const char* n : kToxicity) cols[i++] = {n, Family::kEts};
  static const char* const kEmotion[] = {"emo_neutral_mean", "emo_joy_mean",  "emo_sadness_mean", "emo_anger_mean",
                                         "emo_love_mean",    "emo_fear_mean", "emo_surprise_mean"};
  for (const char* n : kEmotion) cols[i++] = {n, Family::kEts};
  cols[i++] = {"amount_cents_mean", Family::kTrx};
  static const char* const kCounts[] = {"n_lower_words_mean", "n_upper_words_mean", "n_mixed_words_mean",
                                        "n_punctuation_mean", "has_special_chars_mean", "has_digits_mean",
                                        "is_empty_mean"};
  for (const char* n : kCounts) cols[i++] = {n, Family::kSt};
  static const char* const kStats[] = {"n_transactions", "max_txns_single_day", "n_unique_days",
                                       "days_between_max_min_day"};
  for (const char* n : kStats) cols[i++] = {n, Family::kTrx};
  return cols;
}

}  // namespace

const std::array<BlockColumn, kBlockWidth>& block_columns() {
  static const auto cols = make_block_columns();
  return cols;
}

RelationshipStats compute_stats(std::span<const Date> dates) {
  RelationshipStats stats;
  if (dates.empty()) return stats;
  std::map<Date, int> daily;
  for (Date d : dates) ++daily[d];
  stats.n_transactions = static_cast<int>(dates.size());
  stats.n_unique_days = static_cast<int>(daily.size());
  // std::map iterates in date order, so strict comparisons keep the earliest day.
  Date max_day = daily.begin()->first, min_day = daily.begin()->first;
  int max_count = daily.begin()->second, min_count = daily.begin()->second;
  for (const auto& [day, count] : daily) {
    if (count > max_count) {
      max_count = count;
      max_day = day;
    }
    if (count < min_count) {
      min_count = count;
      min_day = day;
    }
  }
  stats.max_txns_single_day = max_count;
  stats.days_between_max_min_day = std::abs(max_day - min_day);
  return stats;
}

AggregateResult aggregate_relationship(std::span<const TransactionFeatures> txn_features) {
  if (txn_features.empty()) throw ValidationError("aggregate_relationship: relationship has no transactions");
  const std::size_t n = txn_features.size();

  std::vector<double> rows(n * kRowWidth);
  std::vector<Date> dates;
  dates.reserve(n);
  for (std::size_t r = 0; r < n; ++r) {
    const auto row = to_row(txn_features[r]);
    std::copy(row.begin(), row.end(), rows.begin() + static_cast<std::ptrdiff_t>(r * kRowWidth));
    dates.push_back(txn_features[r].txn_date);
  }

  const kernels::KernelTable& k = kernels::active();
  std::array<double, 4> sent_max{};
  std::array<double, kToxicityCount + kMeanCount> sums{};
  std::array<double, kShapeCount> shape_min{}, shape_max{};
  k.column_max(rows.data() + kSentimentCol, n, kRowWidth, 4, sent_max.data());
  k.column_sum(rows.data() + kSumCol, n, kRowWidth, sums.size(), sums.data());
  k.column_min(rows.data() + kShapeCol, n, kRowWidth, kShapeCount, shape_min.data());
  k.column_max(rows.data() + kShapeCol, n, kRowWidth, kShapeCount, shape_max.data());

  AggregateResult out;
  std::size_t b = 0;
  for (double v : sent_max) out.block[b++] = v;
  std::vector<double> column(n);
  for (std::size_t c = 0; c < kShapeCount; ++c) {
    for (std::size_t r = 0; r < n; ++r) column[r] = rows[r * kRowWidth + kShapeCol + c];
    out.block[b++] = shape_min[c];
    out.block[b++] = shape_max[c];
    out.block[b++] = median_of(column);
  }
  for (std::size_t c = 0; c < kToxicityCount; ++c) out.block[b++] = sums[c];
  for (std::size_t c = kToxicityCount; c < sums.size(); ++c) out.block[b++] = sums[c] / static_cast<double>(n);

  out.stats = compute_stats(dates);
  out.block[b++] = out.stats.n_transactions;
  out.block[b++] = out.stats.max_txns_single_day;
  out.block[b++] = out.stats.n_unique_days;
  out.block[b++] = out.stats.days_between_max_min_day;
  return out;
}

std::map<RelationshipKey, RelationshipFeatures> join_reciprocity(
    const std::map<RelationshipKey, AggregatedBlock>& forward, const std::map<RelationshipKey, AggregatedBlock>& all_windows) {
  static const std::string layout_id = FeatureLayout::relationship_layout().layout_id();
  std::map<RelationshipKey, RelationshipFeatures> out;
  for (const auto& [key, block] : forward) {
    RelationshipFeatures rf;
    rf.key = key;
    rf.layout_id = layout_id;
    rf.values.reserve(2 * kBlockWidth + 1);
    rf.values.insert(rf.values.end(), block.begin(), block.end());
    auto reply = all_windows.find(key.reversed());
    if (reply != all_windows.end()) {
      rf.values.insert(rf.values.end(), reply->second.begin(), reply->second.end());
      rf.values.push_back(1.0);
    } else {
      rf.values.insert(rf.values.end(), kBlockWidth, 0.0);
      rf.values.push_back(0.0);
    }
    out.emplace(key, std::move(rf));
  }
  return out;
}

}  // namespace txguard::features
