#include "txguard/core/transaction.hpp"

#include "txguard/util/error.hpp"

namespace txguard {

std::string RelationshipKey::id() const {
  std::string out;
  out.reserve(sender.size() + recipient.size() + kRelationshipArrow.size());
  out += sender;
  out += kRelationshipArrow;
  out += recipient;
  return out;
}

RelationshipKey RelationshipKey::parse(std::string_view id) {
  auto pos = id.find(kRelationshipArrow);
  if (pos == std::string_view::npos)
    throw ValidationError("relationship_id must be 'sender→recipient': '" + std::string(id) + "'");
  RelationshipKey key{std::string(id.substr(0, pos)), std::string(id.substr(pos + kRelationshipArrow.size()))};
  if (key.sender.empty() || key.recipient.empty())
    throw ValidationError("relationship_id has an empty party: '" + std::string(id) + "'");
  return key;
}

std::string RelationshipKey::unordered_group() const {
  const std::string& lo = sender < recipient ? sender : recipient;
  const std::string& hi = sender < recipient ? recipient : sender;
  std::string out;
  out.reserve(lo.size() + hi.size() + 1);
  out += lo;
  out += '\x1f';
  out += hi;
  return out;
}

WindowConfig WindowConfig::calendar_month(Date any_day) {
  Date first = Date::from_ymd(any_day.year(), any_day.month(), 1);
  return {first, first.end_of_month()};
}

WindowConfig WindowConfig::make(Date start, Date end) {
  if (end < start) throw ValidationError("window end " + end.to_string() + " precedes start " + start.to_string());
  return {start, end};
}

std::string_view to_string(LabelSource source) {
  switch (source) {
    case LabelSource::kSynthetic:
      return "synthetic";
    case LabelSource::kReviewer:
      return "reviewer";
    case LabelSource::kImport:
      return "import";
  }
  return "import";
}

LabelSource parse_label_source(std::string_view text) {
  if (text == "synthetic") return LabelSource::kSynthetic;
  if (text == "reviewer") return LabelSource::kReviewer;
  if (text == "import") return LabelSource::kImport;
  throw ValidationError("unknown label_source '" + std::string(text) + "'");
}

}  // namespace txguard
