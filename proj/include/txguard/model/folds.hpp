#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "txguard/core/transaction.hpp"

namespace txguard::model {

// Grouped k-fold assignments. Groups are unordered account pairs, so <a,b>
// and <b,a> always land in the same fold; reciprocity features would
// otherwise leak one direction's data into the other's test fold.
struct FoldPlan {
  int k = 0;
  int repeats = 0;
  std::vector<std::map<std::string, int>> assignments;  // per repeat: group -> fold

  int fold_of(const RelationshipKey& key, int repeat) const;
};

// Throws ValidationError when k < 2, repeats < 1 or there are fewer
// distinct groups than folds.
FoldPlan make_fold_plan(std::span<const RelationshipKey> keys, int k, int repeats, std::uint64_t seed);

}  // namespace txguard::model
