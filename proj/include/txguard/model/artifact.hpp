#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "txguard/core/transaction.hpp"
#include "txguard/features/aggregate.hpp"
#include "txguard/features/layout.hpp"
#include "txguard/model/forest.hpp"

namespace txguard::model {

struct TrainingSummary {
  int n_relationships = 0;
  int n_positive = 0;
  int n_negative = 0;
  std::optional<Date> window_start;  // earliest labeled window start
  std::optional<Date> window_end;    // latest labeled window end

  nlohmann::json to_json() const;
  static TrainingSummary from_json(const nlohmann::json& j);
};

struct ModelArtifact {
  Forest forest;
  features::FeatureLayout layout;    // layout of the vectors the model accepts
  std::vector<std::size_t> columns;  // columns of `layout` the forest was trained on
  ForestConfig config;
  TrainingSummary summary;
  std::string version;

  const std::string& layout_id() const { return layout.layout_id(); }
};

// Row-major copy of the selected columns.
std::vector<double> gather_columns(std::span<const features::RelationshipFeatures> rows,
                                   std::span<const std::size_t> columns);

// Every row needs a label (matched by relationship key) and must carry
// `layout`'s id. `columns` defaults to the whole layout.
ModelArtifact train(std::span<const features::RelationshipFeatures> rows, std::span<const LabeledRelationship> labels,
                    const features::FeatureLayout& layout, const ForestConfig& config,
                    std::optional<std::vector<std::size_t>> columns = std::nullopt);

// Positional scores in [0,1]. Throws LayoutMismatchError naming both ids.
std::vector<double> score(const ModelArtifact& model, std::span<const features::RelationshipFeatures> rows);

inline constexpr const char* kModelBlobFile = "model.bin";
inline constexpr const char* kModelManifestFile = "model_manifest.json";

// Writes model.bin and model_manifest.json into `dir`. Both go to temporary
// names first and are renamed into place; the manifest records the blob's
// checksum so a torn or mixed pair is rejected on load.
void save_model(const std::filesystem::path& dir, const ModelArtifact& model, const nlohmann::json& provenance);
ModelArtifact load_model(const std::filesystem::path& dir);

}  // namespace txguard::model
