#include "txguard/core/grouping.hpp"

#include <algorithm>

namespace txguard {

RelationshipMap group_relationships(std::span<const Transaction> txns, const WindowConfig& window) {
  RelationshipMap out;
  for (const Transaction& txn : txns) {
    if (txn.sender == txn.recipient || !window.contains(txn.timestamp)) continue;
    RelationshipKey key{txn.sender, txn.recipient};
    auto [it, inserted] = out.try_emplace(key);
    if (inserted) {
      it->second.key = std::move(key);
      it->second.window = window;
    }
    it->second.transactions.push_back(txn);
  }
  for (auto& [key, rel] : out) {
    std::sort(rel.transactions.begin(), rel.transactions.end(), [](const Transaction& a, const Transaction& b) {
      if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
      return a.txn_id < b.txn_id;
    });
  }
  return out;
}

}  // namespace txguard
