#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "txguard/core/time.hpp"

namespace txguard {

// Maximum description length in Unicode scalar values (NPP limit).
inline constexpr std::size_t kMaxDescriptionChars = 280;

struct Transaction {
  std::string txn_id;
  std::string sender;
  std::string recipient;
  std::int64_t amount_cents = 0;
  Timestamp timestamp;
  std::string description;  // UTF-8, NFC

  bool operator==(const Transaction&) const = default;
};

// Directed sender -> recipient pair; <a,b> and <b,a> are distinct keys.
struct RelationshipKey {
  std::string sender;
  std::string recipient;

  RelationshipKey reversed() const { return {recipient, sender}; }

  // "sender→recipient" (U+2192), identifiers verbatim.
  std::string id() const;
  // Inverse of id(); splits on the first arrow. Throws ValidationError.
  static RelationshipKey parse(std::string_view id);

  // Direction-free group id shared by <a,b> and <b,a>.
  std::string unordered_group() const;

  auto operator<=>(const RelationshipKey&) const = default;
  bool operator==(const RelationshipKey&) const = default;
};

inline constexpr std::string_view kRelationshipArrow = "\xE2\x86\x92";

// Inclusive date range [start, end], evaluated in UTC.
struct WindowConfig {
  Date start;
  Date end;

  // The calendar month containing `any_day`.
  static WindowConfig calendar_month(Date any_day);
  // Throws ValidationError when end < start.
  static WindowConfig make(Date start, Date end);

  bool contains(Timestamp ts) const {
    Date d = ts.date();
    return start <= d && d <= end;
  }

  auto operator<=>(const WindowConfig&) const = default;
  bool operator==(const WindowConfig&) const = default;
};

struct RelationshipWindow {
  RelationshipKey key;
  WindowConfig window;
  std::vector<Transaction> transactions;  // ascending (timestamp, txn_id), non-empty
};

enum class LabelSource { kSynthetic, kReviewer, kImport };

std::string_view to_string(LabelSource source);
LabelSource parse_label_source(std::string_view text);

struct LabeledRelationship {
  RelationshipKey key;
  WindowConfig window;
  int label = 0;  // 1 = highly abusive, 0 = non-abusive
  LabelSource label_source = LabelSource::kSynthetic;

  bool operator==(const LabeledRelationship&) const = default;
};

}  // namespace txguard
