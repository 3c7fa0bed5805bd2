#include "txguard/features/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>

#include "txguard/text/simple_text.hpp"
#include "txguard/util/csv.hpp"
#include "txguard/util/error.hpp"

namespace txguard::features {

const RelationshipFeatures* FeatureTable::find(const RelationshipKey& key) const {
  auto it = std::lower_bound(rows.begin(), rows.end(), key,
                             [](const RelationshipFeatures& r, const RelationshipKey& k) { return r.key < k; });
  return it != rows.end() && it->key == key ? &*it : nullptr;
}

namespace {

TransactionFeatures make_features(const Transaction& txn, const ets::EtsScores& scores) {
  TransactionFeatures tf;
  tf.st = text::extract_simple_text(txn.description);
  tf.ets = scores;
  tf.amount_cents = txn.amount_cents;
  tf.txn_date = txn.timestamp.date();
  return tf;
}

}  // namespace

std::vector<TransactionFeatures> featurize_transactions(const RelationshipWindow& rel, ets::ScorerBackend& backend,
                                                        ets::ScoreCache* cache) {
  std::vector<std::string> texts;
  texts.reserve(rel.transactions.size());
  for (const auto& t : rel.transactions) texts.push_back(t.description);
  const auto scores = ets::score_batch(texts, backend, cache);
  std::vector<TransactionFeatures> out;
  out.reserve(texts.size());
  for (std::size_t i = 0; i < texts.size(); ++i) out.push_back(make_features(rel.transactions[i], scores[i]));
  return out;
}

FeatureTable build_feature_table(const RelationshipMap& relationships, ets::ScorerBackend& backend,
                                 ets::ScoreCache* cache) {
  std::vector<std::string> texts;
  for (const auto& [key, rel] : relationships)
    for (const auto& t : rel.transactions) texts.push_back(t.description);
  const auto scores = ets::score_batch(texts, backend, cache);

  std::map<RelationshipKey, AggregatedBlock> blocks;
  std::size_t next = 0;
  std::vector<TransactionFeatures> tfs;
  for (const auto& [key, rel] : relationships) {
    tfs.clear();
    for (const auto& t : rel.transactions) tfs.push_back(make_features(t, scores[next++]));
    blocks.emplace(key, aggregate_relationship(tfs).block);
  }

  FeatureTable table;
  table.layout = FeatureLayout::relationship_layout();
  for (auto& [key, rf] : join_reciprocity(blocks, blocks)) table.rows.push_back(std::move(rf));
  return table;
}

void write_features_csv(std::ostream& out, const FeatureTable& table) {
  std::vector<std::string> header{"relationship_id"};
  for (auto& n : table.layout.names()) header.push_back(std::move(n));
  util::write_csv_row(out, header);
  std::vector<std::string> fields;
  for (const auto& row : table.rows) {
    fields.clear();
    fields.push_back(row.key.id());
    for (double v : row.values) fields.push_back(util::format_double(v));
    util::write_csv_row(out, fields);
  }
}

FeatureTable read_features_csv(std::istream& in, const FeatureLayout& layout) {
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("features.csv is empty");
  auto header = util::split_csv_line(line);
  if (header.empty() || header[0] != "relationship_id")
    throw ValidationError("features.csv header must start with relationship_id");
  std::vector<FeatureSpec> found;
  for (std::size_t i = 1; i < header.size(); ++i) {
    // Family/direction come from the manifest; the header only carries names.
    const FeatureSpec* spec = i - 1 < layout.size() ? &layout.features()[i - 1] : nullptr;
    found.push_back({header[i], spec ? spec->family : Family::kTrx, spec ? spec->direction : Direction::kForward});
  }
  const std::string header_id = compute_layout_id(found);
  if (header_id != layout.layout_id()) throw LayoutMismatchError(layout.layout_id(), header_id);

  FeatureTable table;
  table.layout = layout;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    auto fields = util::split_csv_line(line);
    if (fields.size() != layout.size() + 1)
      throw ValidationError("features.csv line " + std::to_string(line_no) + ": expected " +
                            std::to_string(layout.size() + 1) + " fields, got " + std::to_string(fields.size()));
    RelationshipFeatures rf;
    rf.key = RelationshipKey::parse(fields[0]);
    rf.layout_id = layout.layout_id();
    rf.values.reserve(layout.size());
    for (std::size_t i = 1; i < fields.size(); ++i) {
      try {
        rf.values.push_back(util::parse_double(fields[i]));
      } catch (const std::invalid_argument& e) {
        throw ValidationError("features.csv line " + std::to_string(line_no) + ": " + e.what());
      }
    }
    table.rows.push_back(std::move(rf));
  }
  std::sort(table.rows.begin(), table.rows.end(),
            [](const RelationshipFeatures& a, const RelationshipFeatures& b) { return a.key < b.key; });
  return table;
}

void write_manifest(const std::filesystem::path& path, const FeatureLayout& layout, const nlohmann::json& provenance) {
  nlohmann::json j = layout.to_manifest();
  j["provenance"] = provenance;
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

FeatureLayout read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("malformed manifest " + path.string() + ": " + e.what());
  }
  return FeatureLayout::from_manifest(j);
}

}  // namespace txguard::features
