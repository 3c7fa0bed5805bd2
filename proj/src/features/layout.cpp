#include "txguard/features/layout.hpp"

#include "txguard/features/aggregate.hpp"
#include "txguard/util/error.hpp"
#include "txguard/util/hash.hpp"

namespace txguard::features {

std::string_view to_string(Family family) {
  switch (family) {
    case Family::kEts:
      return "ETS";
    case Family::kSt:
      return "ST";
    case Family::kTrx:
      return "TRX";
  }
  return "?";
}

Family parse_family(std::string_view name) {
  if (name == "ETS") return Family::kEts;
  if (name == "ST") return Family::kSt;
  if (name == "TRX") return Family::kTrx;
  throw ValidationError("unknown feature family '" + std::string(name) + "'");
}

std::string_view to_string(Direction direction) { return direction == Direction::kForward ? "fwd" : "rcp"; }

std::string compute_layout_id(const std::vector<FeatureSpec>& features) {
  util::Fnv1a64 h;
  h.update("txguard-layout-v1").separator();
  for (const auto& f : features) h.update(f.name).separator().update(to_string(f.family)).separator().update(to_string(f.direction)).separator();
  return util::to_hex(h.digest());
}

FeatureLayout::FeatureLayout(std::vector<FeatureSpec> features)
    : features_(std::move(features)), layout_id_(compute_layout_id(features_)) {}

FeatureLayout FeatureLayout::relationship_layout() {
  std::vector<FeatureSpec> specs;
  for (Direction dir : {Direction::kForward, Direction::kReciprocal}) {
    const std::string prefix = std::string(to_string(dir)) + "_";
    for (const auto& col : block_columns()) specs.push_back({prefix + std::string(col.name), col.family, dir});
  }
  specs.push_back({"rcp_present", Family::kTrx, Direction::kReciprocal});
  return FeatureLayout(std::move(specs));
}

std::vector<std::string> FeatureLayout::names() const {
  std::vector<std::string> out;
  out.reserve(features_.size());
  for (const auto& f : features_) out.push_back(f.name);
  return out;
}

std::vector<std::size_t> FeatureLayout::select(const std::set<Family>& families, bool with_reciprocity) const {
  if (families.empty()) throw ValidationError("feature selection needs at least one family");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < features_.size(); ++i) {
    const auto& f = features_[i];
    if (f.direction == Direction::kReciprocal && !with_reciprocity) continue;
    if (f.name == "rcp_present" || families.count(f.family)) out.push_back(i);
  }
  return out;
}

nlohmann::json FeatureLayout::to_manifest() const {
  nlohmann::json features = nlohmann::json::array();
  for (const auto& f : features_)
    features.push_back({{"name", f.name}, {"family", to_string(f.family)}, {"direction", to_string(f.direction)}});
  return {{"layout_id", layout_id_},
          {"features", features},
          {"emotion_output", "distribution"},
          {"reciprocal_missing", "zero-filled block with rcp_present = 0"}};
}

FeatureLayout FeatureLayout::from_manifest(const nlohmann::json& manifest) {
  if (!manifest.is_object() || !manifest.contains("features") || !manifest["features"].is_array())
    throw ValidationError("feature manifest lacks a 'features' array");
  std::vector<FeatureSpec> specs;
  for (const auto& f : manifest["features"]) {
    if (!f.is_object() || !f.contains("name") || !f.contains("family") || !f.contains("direction"))
      throw ValidationError("feature manifest entry needs name, family and direction");
    const std::string dir = f["direction"].get<std::string>();
    if (dir != "fwd" && dir != "rcp") throw ValidationError("feature direction must be fwd or rcp");
    specs.push_back({f["name"].get<std::string>(), parse_family(f["family"].get<std::string>()),
                     dir == "fwd" ? Direction::kForward : Direction::kReciprocal});
  }
  FeatureLayout layout(std::move(specs));
  if (manifest.contains("layout_id") && manifest["layout_id"].get<std::string>() != layout.layout_id())
    throw LayoutMismatchError(manifest["layout_id"].get<std::string>(), layout.layout_id());
  return layout;
}

}  // namespace txguard::features
