#include "txguard/model/folds.hpp"

#include <set>

#include "txguard/util/error.hpp"
#include "txguard/util/hash.hpp"
#include "txguard/util/rng.hpp"

namespace txguard::model {

int FoldPlan::fold_of(const RelationshipKey& key, int repeat) const {
  if (repeat < 0 || repeat >= static_cast<int>(assignments.size())) throw ValidationError("repeat out of range");
  const auto& a = assignments[static_cast<std::size_t>(repeat)];
  auto it = a.find(key.unordered_group());
  if (it == a.end()) throw NotFoundError("relationship not in fold plan: " + key.id());
  return it->second;
}

FoldPlan make_fold_plan(std::span<const RelationshipKey> keys, int k, int repeats, std::uint64_t seed) {
  if (k < 2) throw ValidationError("k must be at least 2");
  if (repeats < 1) throw ValidationError("repeats must be at least 1");
  std::set<std::string> unique;
  for (const auto& key : keys) unique.insert(key.unordered_group());
  if (static_cast<int>(unique.size()) < k)
    throw ValidationError("only " + std::to_string(unique.size()) + " relationship groups for " + std::to_string(k) +
                          " folds");

  FoldPlan plan;
  plan.k = k;
  plan.repeats = repeats;
  const std::vector<std::string> groups(unique.begin(), unique.end());
  for (int r = 0; r < repeats; ++r) {
    util::Rng rng(util::mix64(seed ^ util::mix64(static_cast<std::uint64_t>(r) + 1)));
    std::vector<std::string> order = groups;
    rng.shuffle(order);
    std::map<std::string, int> assignment;
    for (std::size_t i = 0; i < order.size(); ++i) assignment[order[i]] = static_cast<int>(i % static_cast<std::size_t>(k));
    plan.assignments.push_back(std::move(assignment));
  }
  return plan;
}

}  // namespace txguard::model
