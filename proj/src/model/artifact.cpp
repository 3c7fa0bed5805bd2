#include "txguard/model/artifact.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "txguard/util/error.hpp"
#include "txguard/util/hash.hpp"
#include "txguard/version.hpp"

namespace txguard::model {

namespace fs = std::filesystem;

nlohmann::json TrainingSummary::to_json() const {
  nlohmann::json j = {{"n_relationships", n_relationships}, {"n_positive", n_positive}, {"n_negative", n_negative}};
  j["window_start"] = window_start ? nlohmann::json(window_start->to_string()) : nlohmann::json(nullptr);
  j["window_end"] = window_end ? nlohmann::json(window_end->to_string()) : nlohmann::json(nullptr);
  return j;
}

TrainingSummary TrainingSummary::from_json(const nlohmann::json& j) {
  TrainingSummary s;
  s.n_relationships = j.at("n_relationships").get<int>();
  s.n_positive = j.at("n_positive").get<int>();
  s.n_negative = j.at("n_negative").get<int>();
  if (j.contains("window_start") && !j["window_start"].is_null())
    s.window_start = Date::parse(j["window_start"].get<std::string>());
  if (j.contains("window_end") && !j["window_end"].is_null())
    s.window_end = Date::parse(j["window_end"].get<std::string>());
  return s;
}

std::vector<double> gather_columns(std::span<const features::RelationshipFeatures> rows,
                                   std::span<const std::size_t> columns) {
  std::vector<double> out;
  out.reserve(rows.size() * columns.size());
  for (const auto& row : rows) {
    for (std::size_t c : columns) {
      if (c >= row.values.size()) throw ValidationError("feature row " + row.key.id() + " is too short");
      out.push_back(row.values[c]);
    }
  }
  return out;
}

ModelArtifact train(std::span<const features::RelationshipFeatures> rows, std::span<const LabeledRelationship> labels,
                    const features::FeatureLayout& layout, const ForestConfig& config,
                    std::optional<std::vector<std::size_t>> columns) {
  std::map<RelationshipKey, const LabeledRelationship*> by_key;
  for (const auto& l : labels) by_key[l.key] = &l;

  ModelArtifact model;
  model.layout = layout;
  model.config = config;
  model.version = kToolVersion;
  if (columns) {
    for (std::size_t c : *columns)
      if (c >= layout.size()) throw ValidationError("column index out of range for layout");
    model.columns = std::move(*columns);
  } else {
    for (std::size_t c = 0; c < layout.size(); ++c) model.columns.push_back(c);
  }
  if (model.columns.empty()) throw ValidationError("no feature columns selected");

  std::vector<int> y;
  y.reserve(rows.size());
  for (const auto& row : rows) {
    if (row.layout_id != layout.layout_id()) throw LayoutMismatchError(layout.layout_id(), row.layout_id);
    auto it = by_key.find(row.key);
    if (it == by_key.end()) throw ValidationError("no label for relationship " + row.key.id());
    const LabeledRelationship& l = *it->second;
    y.push_back(l.label);
    (l.label ? model.summary.n_positive : model.summary.n_negative)++;
    if (!model.summary.window_start || l.window.start < *model.summary.window_start) model.summary.window_start = l.window.start;
    if (!model.summary.window_end || *model.summary.window_end < l.window.end) model.summary.window_end = l.window.end;
  }
  model.summary.n_relationships = static_cast<int>(rows.size());
  if (model.summary.n_positive == 0 || model.summary.n_negative == 0)
    throw ValidationError("degenerate training set: labels contain a single class");

  std::vector<double> x = gather_columns(rows, model.columns);
  model.forest = Forest::train(MatrixView{x, rows.size(), model.columns.size()}, y, config);
  return model;
}

std::vector<double> score(const ModelArtifact& model, std::span<const features::RelationshipFeatures> rows) {
  for (const auto& row : rows)
    if (row.layout_id != model.layout_id()) throw LayoutMismatchError(model.layout_id(), row.layout_id);
  std::vector<double> x = gather_columns(rows, model.columns);
  return model.forest.predict(MatrixView{x, rows.size(), model.columns.size()});
}

namespace {

void write_file_synced(const fs::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

void save_model(const fs::path& dir, const ModelArtifact& model, const nlohmann::json& provenance) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

  std::ostringstream blob_stream;
  model.forest.serialize(blob_stream);
  const std::string blob = blob_stream.str();

  nlohmann::json columns = nlohmann::json::array();
  for (std::size_t c : model.columns) columns.push_back(model.layout.features()[c].name);
  nlohmann::json manifest = {
      {"format", "txguard-model"},
      {"version", model.version},
      {"layout_id", model.layout_id()},
      {"layout", model.layout.to_manifest()},
      {"columns", columns},
      {"config", model.config.to_json()},
      {"training_summary", model.summary.to_json()},
      {"blob", {{"file", kModelBlobFile}, {"bytes", blob.size()}, {"fnv1a64", util::to_hex(util::fnv1a64(blob))}}},
      {"provenance", provenance},
  };

  const fs::path blob_tmp = dir / (std::string(kModelBlobFile) + ".tmp");
  const fs::path manifest_tmp = dir / (std::string(kModelManifestFile) + ".tmp");
  write_file_synced(blob_tmp, blob);
  write_file_synced(manifest_tmp, manifest.dump(2) + "\n");
  fs::rename(blob_tmp, dir / kModelBlobFile, ec);
  if (!ec) fs::rename(manifest_tmp, dir / kModelManifestFile, ec);
  if (ec) throw IoError("cannot move model files into " + dir.string() + ": " + ec.message());
}

ModelArtifact load_model(const fs::path& dir) {
  const std::string manifest_text = read_file(dir / kModelManifestFile);
  const std::string blob = read_file(dir / kModelBlobFile);
  ModelArtifact model;
  try {
    const nlohmann::json j = nlohmann::json::parse(manifest_text);
    if (j.value("format", "") != "txguard-model") throw ValidationError("not a txguard model manifest");
    const auto& b = j.at("blob");
    if (b.at("bytes").get<std::size_t>() != blob.size() ||
        b.at("fnv1a64").get<std::string>() != util::to_hex(util::fnv1a64(blob)))
      throw ValidationError("model.bin does not match model_manifest.json (checksum differs)");
    model.layout = features::FeatureLayout::from_manifest(j.at("layout"));
    if (j.at("layout_id").get<std::string>() != model.layout_id())
      throw LayoutMismatchError(j.at("layout_id").get<std::string>(), model.layout_id());
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < model.layout.size(); ++i) index[model.layout.features()[i].name] = i;
    for (const auto& name : j.at("columns")) {
      auto it = index.find(name.get<std::string>());
      if (it == index.end()) throw ValidationError("model column not in layout: " + name.get<std::string>());
      model.columns.push_back(it->second);
    }
    model.config = ForestConfig::from_json(j.at("config"));
    model.summary = TrainingSummary::from_json(j.at("training_summary"));
    model.version = j.at("version").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed model manifest: ") + e.what());
  }
  std::istringstream in(blob);
  model.forest = Forest::deserialize(in);
  if (model.forest.n_features() != model.columns.size())
    throw ValidationError("model.bin feature count does not match manifest columns");
  return model;
}

}  // namespace txguard::model
