#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <vector>

#include "txguard/core/grouping.hpp"
#include "txguard/ets/backend.hpp"
#include "txguard/features/aggregate.hpp"

namespace txguard::features {

struct FeatureTable {
  FeatureLayout layout;
  std::vector<RelationshipFeatures> rows;  // sorted by key

  const RelationshipFeatures* find(const RelationshipKey& key) const;
};

// Text + ETS features for each transaction of one relationship, scoring
// through `backend` (one batch call).
std::vector<TransactionFeatures> featurize_transactions(const RelationshipWindow& rel, ets::ScorerBackend& backend,
                                                        ets::ScoreCache* cache = nullptr);

// group -> per-transaction features -> aggregate -> reciprocity join. All
// descriptions in the window go to the backend in a single batch.
FeatureTable build_feature_table(const RelationshipMap& relationships, ets::ScorerBackend& backend,
                                 ets::ScoreCache* cache = nullptr);

// features.csv: header `relationship_id,<layout names>`, one row per relationship.
void write_features_csv(std::ostream& out, const FeatureTable& table);
// Rejects a header that does not match `layout` with LayoutMismatchError.
FeatureTable read_features_csv(std::istream& in, const FeatureLayout& layout);

void write_manifest(const std::filesystem::path& path, const FeatureLayout& layout, const nlohmann::json& provenance);
FeatureLayout read_manifest(const std::filesystem::path& path);

}  // namespace txguard::features
