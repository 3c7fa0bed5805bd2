#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace txguard::features {

enum class Family { kEts, kSt, kTrx };
enum class Direction { kForward, kReciprocal };

std::string_view to_string(Family family);
Family parse_family(std::string_view name);  // "ETS" | "ST" | "TRX"; throws ValidationError
std::string_view to_string(Direction direction);

struct FeatureSpec {
  std::string name;
  Family family;
  Direction direction;

  bool operator==(const FeatureSpec&) const = default;
};

// Ordered feature names plus a content hash. Persisted next to every
// features.csv and model so train/score skew is detected.
class FeatureLayout {
 public:
  FeatureLayout() = default;
  explicit FeatureLayout(std::vector<FeatureSpec> features);

  // fwd_* block, rcp_* block, then rcp_present.
  static FeatureLayout relationship_layout();

  const std::vector<FeatureSpec>& features() const { return features_; }
  std::size_t size() const { return features_.size(); }
  const std::string& layout_id() const { return layout_id_; }
  std::vector<std::string> names() const;

  // Column indices for the given families; reciprocal columns (including
  // rcp_present) only when `with_reciprocity`. Throws ValidationError when
  // `families` is empty.
  std::vector<std::size_t> select(const std::set<Family>& families, bool with_reciprocity) const;

  nlohmann::json to_manifest() const;
  // Recomputes the id from the listed features and rejects a manifest whose
  // stored id disagrees.
  static FeatureLayout from_manifest(const nlohmann::json& manifest);

 private:
  std::vector<FeatureSpec> features_;
  std::string layout_id_;
};

std::string compute_layout_id(const std::vector<FeatureSpec>& features);

}  // namespace txguard::features
