#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "txguard/core/transaction.hpp"

namespace txguard {

struct ValidationWarning {
  std::size_t line = 0;  // 1-based input line
  std::string message;
};

struct ParseResult {
  std::vector<Transaction> transactions;
  std::vector<ValidationWarning> warnings;
};

// Reads transactions.jsonl. Malformed records become warnings and are
// skipped; descriptions are NFC-normalized and truncated to 280 characters.
// Duplicate txn_id keeps the first occurrence.
ParseResult parse_transactions(std::istream& in);
// Throws IoError if the file cannot be opened.
ParseResult parse_transactions_file(const std::filesystem::path& path);

std::string to_jsonl_line(const Transaction& txn);
void write_transactions(std::ostream& out, const std::vector<Transaction>& txns);

// labels.csv: header `relationship_id,label,label_source`.
// The file carries no window; every row is stamped with `window`.
std::vector<LabeledRelationship> parse_labels(std::istream& in, const WindowConfig& window);
std::vector<LabeledRelationship> parse_labels_file(const std::filesystem::path& path, const WindowConfig& window);
void write_labels(std::ostream& out, const std::vector<LabeledRelationship>& labels);

}  // namespace txguard
