#pragma once

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "txguard/core/transaction.hpp"
#include "txguard/ets/backend.hpp"
#include "txguard/model/artifact.hpp"

namespace txguard::service {

enum class ReviewLabel { kAbusive, kNotAbusive, kUncertain };

std::string_view to_string(ReviewLabel label);
ReviewLabel parse_review_label(std::string_view text);  // throws ValidationError

struct Review {
  ReviewLabel label = ReviewLabel::kUncertain;
  std::string reviewer_id;
  Timestamp decided_at;
};

struct EvidenceItem {
  std::string direction;  // "forward" (case sender -> recipient) or "reply"
  std::string txn_id;
  Timestamp timestamp;
  std::int64_t amount_cents = 0;
  std::string description;
};

struct CaseRecord {
  std::string case_id;
  RelationshipKey key;
  WindowConfig window;
  double score = 0.0;
  int rank = 0;
  std::vector<EvidenceItem> evidence;  // both directions, ascending (timestamp, txn_id)
  std::optional<Review> review;        // filled from the label store, never persisted in a batch
};

// Stable across re-runs: hash of relationship id and window bounds.
std::string make_case_id(const RelationshipKey& key, const WindowConfig& window);

struct Batch {
  std::string batch_id;
  WindowConfig window;
  std::string layout_id;
  std::string model_version;
  int top_n = 0;
  int n_scored = 0;  // relationships scored before the cut
  std::vector<CaseRecord> cases;
};

nlohmann::json to_json(const EvidenceItem& item);
nlohmann::json to_json(const Review& review);
// Summary omits evidence; used by the case list endpoint.
nlohmann::json case_summary_json(const CaseRecord& c);
nlohmann::json to_json(const CaseRecord& c);
nlohmann::json to_json(const Batch& batch);
Batch batch_from_json(const nlohmann::json& j);

inline constexpr int kDefaultTopN = 50;

// group -> featurize -> aggregate -> reciprocity -> score over `window`,
// then the top_n relationships by score (ties by relationship id). The batch
// id is derived from the content, so identical inputs give identical bytes.
// Throws LayoutMismatchError when the model was trained on another layout.
Batch run_scoring_batch(std::span<const Transaction> txns, const model::ModelArtifact& model, const WindowConfig& window,
                        int top_n, ets::ScorerBackend& backend, ets::ScoreCache* cache = nullptr);

// Directory of immutable batch files: <root>/batches/<batch_id>.json.
class BatchStore {
 public:
  explicit BatchStore(std::filesystem::path root);

  // Writes atomically (temp + rename). Re-saving an identical batch is a no-op.
  void save(const Batch& batch);
  std::vector<std::string> list() const;  // sorted ids
  // Throws NotFoundError.
  Batch get(const std::string& batch_id) const;
  // The batch containing the case; throws NotFoundError.
  std::pair<std::string, CaseRecord> find_case(const std::string& case_id) const;
  bool has_case(const std::string& case_id) const;

 private:
  void load_all();

  std::filesystem::path root_;
  mutable std::shared_mutex mutex_;
  std::map<std::string, Batch> batches_;
  std::map<std::string, std::pair<std::string, std::size_t>> case_index_;  // case -> (batch, position)
};

}  // namespace txguard::service
