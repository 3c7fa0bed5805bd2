#pragma once

#include <map>
#include <span>

#include "txguard/core/transaction.hpp"

namespace txguard {

using RelationshipMap = std::map<RelationshipKey, RelationshipWindow>;

// Partitions in-window, non-self transactions by directed pair. Each list is
// sorted by (timestamp, txn_id) so the result does not depend on input order.
RelationshipMap group_relationships(std::span<const Transaction> txns, const WindowConfig& window);

}  // namespace txguard
