#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "txguard/core/transaction.hpp"
#include "txguard/ets/scores.hpp"
#include "txguard/features/layout.hpp"
#include "txguard/text/simple_text.hpp"

namespace txguard::features {

struct TransactionFeatures {
  text::SimpleTextFeatures st;
  ets::EtsScores ets;
  std::int64_t amount_cents = 0;
  Date txn_date;
};

struct RelationshipStats {
  int n_transactions = 0;
  int max_txns_single_day = 0;
  int n_unique_days = 0;
  // |earliest day with the max daily count - earliest day with the min daily count|
  int days_between_max_min_day = 0;

  bool operator==(const RelationshipStats&) const = default;
};

// One direction's aggregated features:
//   sentiment (4)                                   -> max
//   desc_length, n_words, longest_word_len,
//   word_break_proportion                           -> min, max, median
//   toxicity (7)                                    -> sum
//   emotion (7), amount, lower/upper/mixed word
//   counts, punctuation count                       -> mean
//   has_special_chars, has_digits, is_empty         -> mean (fraction of transactions)
//   followed by the four RelationshipStats values.
inline constexpr std::size_t kBlockWidth = 42;
using AggregatedBlock = std::array<double, kBlockWidth>;

struct BlockColumn {
  std::string_view name;
  Family family;
};
const std::array<BlockColumn, kBlockWidth>& block_columns();

struct AggregateResult {
  AggregatedBlock block{};
  RelationshipStats stats;
};

// Throws ValidationError on an empty list.
AggregateResult aggregate_relationship(std::span<const TransactionFeatures> txn_features);

RelationshipStats compute_stats(std::span<const Date> dates);

struct RelationshipFeatures {
  RelationshipKey key;
  std::vector<double> values;
  std::string layout_id;
};

// Appends the reverse direction's block (zeros when <b,a> is absent) and a
// presence flag to each forward block.
std::map<RelationshipKey, RelationshipFeatures> join_reciprocity(
    const std::map<RelationshipKey, AggregatedBlock>& forward, const std::map<RelationshipKey, AggregatedBlock>& all_windows);

}  // namespace txguard::features
