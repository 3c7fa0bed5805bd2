#include "txguard/core/ingest.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include <json.hpp>

#include "txguard/text/unicode.hpp"
#include "txguard/util/csv.hpp"
#include "txguard/util/error.hpp"

namespace txguard {

using nlohmann::json;

namespace {

const json& require(const json& obj, const char* field) {
  auto it = obj.find(field);
  if (it == obj.end()) throw ValidationError(std::string("missing field '") + field + "'");
  return *it;
}

std::string require_string(const json& obj, const char* field) {
  const json& v = require(obj, field);
  if (!v.is_string()) throw ValidationError(std::string("field '") + field + "' must be a string");
  return v.get<std::string>();
}

}  // namespace

ParseResult parse_transactions(std::istream& in) {
  ParseResult result;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto warn = [&](std::string msg) { result.warnings.push_back({line_no, std::move(msg)}); };
    try {
      json obj = json::parse(line);
      if (!obj.is_object()) throw ValidationError("record is not a JSON object");
      Transaction txn;
      txn.txn_id = require_string(obj, "txn_id");
      txn.sender = require_string(obj, "sender");
      txn.recipient = require_string(obj, "recipient");
      const json& amount = require(obj, "amount_cents");
      if (!amount.is_number_integer()) throw ValidationError("field 'amount_cents' must be an integer");
      if (amount.is_number_unsigned()) {
        auto u = amount.get<std::uint64_t>();
        if (u > static_cast<std::uint64_t>(INT64_MAX)) throw ValidationError("amount_cents out of range");
        txn.amount_cents = static_cast<std::int64_t>(u);
      } else {
        txn.amount_cents = amount.get<std::int64_t>();
      }
      if (txn.amount_cents < 0) throw ValidationError("amount_cents must be >= 0");
      txn.timestamp = Timestamp::parse_rfc3339(require_string(obj, "timestamp"));
      if (txn.txn_id.empty() || txn.sender.empty() || txn.recipient.empty())
        throw ValidationError("txn_id, sender and recipient must be non-empty");

      std::string description = text::nfc_normalize(require_string(obj, "description"));
      std::size_t chars = text::char_count(description);
      if (chars > kMaxDescriptionChars) {
        description = text::truncate_chars(description, kMaxDescriptionChars);
        warn("txn " + txn.txn_id + ": description truncated from " + std::to_string(chars) + " to " +
             std::to_string(kMaxDescriptionChars) + " characters");
      }
      txn.description = std::move(description);

      if (!seen.insert(txn.txn_id).second) {
        warn("duplicate txn_id " + txn.txn_id + " ignored; first occurrence kept");
        continue;
      }
      result.transactions.push_back(std::move(txn));
    } catch (const json::exception& e) {
      warn(std::string("malformed JSON: ") + e.what());
    } catch (const ValidationError& e) {
      warn(e.what());
    }
  }
  if (in.bad()) throw IoError("read error while parsing transactions");
  return result;
}

ParseResult parse_transactions_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open transactions file " + path.string());
  return parse_transactions(in);
}

std::string to_jsonl_line(const Transaction& txn) {
  // Fixed key order keeps generated corpora byte-stable.
  json obj = json::object();
  obj["txn_id"] = txn.txn_id;
  obj["sender"] = txn.sender;
  obj["recipient"] = txn.recipient;
  obj["amount_cents"] = txn.amount_cents;
  obj["timestamp"] = txn.timestamp.to_rfc3339();
  obj["description"] = txn.description;
  return obj.dump();
}

void write_transactions(std::ostream& out, const std::vector<Transaction>& txns) {
  for (const Transaction& txn : txns) out << to_jsonl_line(txn) << '\n';
}

std::vector<LabeledRelationship> parse_labels(std::istream& in, const WindowConfig& window) {
  std::vector<LabeledRelationship> out;
  std::string line;
  if (!std::getline(in, line)) return out;
  auto header = util::split_csv_line(line);
  if (header.size() < 2 || header[0] != "relationship_id" || header[1] != "label")
    throw ValidationError("labels.csv header must start with relationship_id,label");
  const bool has_source = header.size() >= 3 && header[2] == "label_source";
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    auto fields = util::split_csv_line(line);
    if (fields.size() < 2) throw ValidationError("labels.csv line " + std::to_string(line_no) + ": too few fields");
    LabeledRelationship lr;
    lr.key = RelationshipKey::parse(fields[0]);
    lr.window = window;
    if (fields[1] == "1") {
      lr.label = 1;
    } else if (fields[1] == "0") {
      lr.label = 0;
    } else {
      throw ValidationError("labels.csv line " + std::to_string(line_no) + ": label must be 0 or 1");
    }
    lr.label_source = has_source && fields.size() >= 3 ? parse_label_source(fields[2]) : LabelSource::kImport;
    out.push_back(std::move(lr));
  }
  return out;
}

std::vector<LabeledRelationship> parse_labels_file(const std::filesystem::path& path, const WindowConfig& window) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open labels file " + path.string());
  return parse_labels(in, window);
}

void write_labels(std::ostream& out, const std::vector<LabeledRelationship>& labels) {
  out << "relationship_id,label,label_source\n";
  for (const auto& lr : labels)
    util::write_csv_row(out, {lr.key.id(), std::to_string(lr.label), std::string(to_string(lr.label_source))});
}

}  // namespace txguard
