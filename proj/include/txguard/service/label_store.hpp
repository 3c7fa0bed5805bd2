#pragma once

#include <filesystem>
#include <functional>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "txguard/service/batch.hpp"

namespace txguard::service {

struct LabelEvent {
  std::string case_id;
  ReviewLabel label = ReviewLabel::kUncertain;
  std::string reviewer_id;
  Timestamp decided_at;

  nlohmann::json to_json() const;
  static LabelEvent from_json(const nlohmann::json& j);  // throws ValidationError
};

using Clock = std::function<Timestamp()>;
Timestamp system_now();

// Append-only JSONL event log (labels.events.jsonl). Writes are serialized
// and fsync'd before record() returns; reads see every acknowledged event.
class LabelStore {
 public:
  explicit LabelStore(std::filesystem::path path, Clock clock = system_now);

  // Validates the reviewer id and stamps decided_at from the clock.
  LabelEvent record(const std::string& case_id, ReviewLabel label, const std::string& reviewer_id);

  std::vector<LabelEvent> events() const;
  std::vector<LabelEvent> history(const std::string& case_id) const;
  std::optional<LabelEvent> latest(const std::string& case_id) const;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  Clock clock_;
  mutable std::mutex mutex_;
  std::vector<LabelEvent> events_;
};

// Latest reviewer decision per case in the selected batches (all batches
// when `batch_ids` is empty): abusive -> 1, not_abusive -> 0, uncertain
// skipped. Sorted by relationship id. Unknown batch ids throw NotFoundError.
std::vector<LabeledRelationship> export_training_labels(const BatchStore& batches, const LabelStore& labels,
                                                        std::span<const std::string> batch_ids);

// labels.csv text (header always present).
std::string export_training_labels_csv(const BatchStore& batches, const LabelStore& labels,
                                       std::span<const std::string> batch_ids);

}  // namespace txguard::service
