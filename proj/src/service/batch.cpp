#include "txguard/service/batch.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "txguard/core/grouping.hpp"
#include "txguard/features/pipeline.hpp"
#include "txguard/util/csv.hpp"
#include "txguard/util/error.hpp"
#include "txguard/util/hash.hpp"

namespace txguard::service {

namespace fs = std::filesystem;

std::string_view to_string(ReviewLabel label) {
  switch (label) {
    case ReviewLabel::kAbusive:
      return "abusive";
    case ReviewLabel::kNotAbusive:
      return "not_abusive";
    case ReviewLabel::kUncertain:
      return "uncertain";
  }
  return "";
}

ReviewLabel parse_review_label(std::string_view text) {
  if (text == "abusive") return ReviewLabel::kAbusive;
  if (text == "not_abusive") return ReviewLabel::kNotAbusive;
  if (text == "uncertain") return ReviewLabel::kUncertain;
  throw ValidationError("label must be one of abusive, not_abusive, uncertain; got '" + std::string(text) + "'");
}

std::string make_case_id(const RelationshipKey& key, const WindowConfig& window) {
  util::Fnv1a64 h;
  h.update(key.id()).separator().update(window.start.to_string()).separator().update(window.end.to_string());
  return "case-" + util::to_hex(h.digest());
}

nlohmann::json to_json(const EvidenceItem& item) {
  return {{"direction", item.direction},
          {"txn_id", item.txn_id},
          {"timestamp", item.timestamp.to_rfc3339()},
          {"amount_cents", item.amount_cents},
          {"description", item.description}};
}

nlohmann::json to_json(const Review& review) {
  return {{"label", to_string(review.label)},
          {"reviewer_id", review.reviewer_id},
          {"decided_at", review.decided_at.to_rfc3339()}};
}

nlohmann::json case_summary_json(const CaseRecord& c) {
  return {{"case_id", c.case_id},
          {"relationship_id", c.key.id()},
          {"sender", c.key.sender},
          {"recipient", c.key.recipient},
          {"window_start", c.window.start.to_string()},
          {"window_end", c.window.end.to_string()},
          {"score", c.score},
          {"rank", c.rank},
          {"n_evidence", c.evidence.size()},
          {"review", c.review ? to_json(*c.review) : nlohmann::json(nullptr)}};
}

nlohmann::json to_json(const CaseRecord& c) {
  nlohmann::json j = case_summary_json(c);
  nlohmann::json ev = nlohmann::json::array();
  for (const auto& e : c.evidence) ev.push_back(to_json(e));
  j["evidence"] = std::move(ev);
  return j;
}

nlohmann::json to_json(const Batch& batch) {
  nlohmann::json cases = nlohmann::json::array();
  for (const auto& c : batch.cases) {
    nlohmann::json j = to_json(c);
    j.erase("review");
    cases.push_back(std::move(j));
  }
  return {{"batch_id", batch.batch_id},   {"window_start", batch.window.start.to_string()},
          {"window_end", batch.window.end.to_string()}, {"layout_id", batch.layout_id},
          {"model_version", batch.model_version}, {"top_n", batch.top_n},
          {"n_scored", batch.n_scored},   {"cases", cases}};
}

Batch batch_from_json(const nlohmann::json& j) {
  try {
    Batch b;
    b.batch_id = j.at("batch_id").get<std::string>();
    b.window = WindowConfig::make(Date::parse(j.at("window_start").get<std::string>()),
                                  Date::parse(j.at("window_end").get<std::string>()));
    b.layout_id = j.at("layout_id").get<std::string>();
    b.model_version = j.at("model_version").get<std::string>();
    b.top_n = j.at("top_n").get<int>();
    b.n_scored = j.at("n_scored").get<int>();
    for (const auto& cj : j.at("cases")) {
      CaseRecord c;
      c.case_id = cj.at("case_id").get<std::string>();
      c.key = RelationshipKey::parse(cj.at("relationship_id").get<std::string>());
      c.window = b.window;
      c.score = cj.at("score").get<double>();
      c.rank = cj.at("rank").get<int>();
      for (const auto& ej : cj.at("evidence")) {
        c.evidence.push_back({ej.at("direction").get<std::string>(), ej.at("txn_id").get<std::string>(),
                              Timestamp::parse_rfc3339(ej.at("timestamp").get<std::string>()),
                              ej.at("amount_cents").get<std::int64_t>(), ej.at("description").get<std::string>()});
      }
      b.cases.push_back(std::move(c));
    }
    return b;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed batch: ") + e.what());
  }
}

Batch run_scoring_batch(std::span<const Transaction> txns, const model::ModelArtifact& model, const WindowConfig& window,
                        int top_n, ets::ScorerBackend& backend, ets::ScoreCache* cache) {
  if (top_n < 0) throw ValidationError("top_n must be non-negative");
  Batch batch;
  batch.window = window;
  batch.layout_id = model.layout_id();
  batch.model_version = model.version;
  batch.top_n = top_n;

  const RelationshipMap rels = group_relationships(txns, window);
  if (!rels.empty()) {
    const features::FeatureTable table = features::build_feature_table(rels, backend, cache);
    if (table.layout.layout_id() != model.layout_id())
      throw LayoutMismatchError(model.layout_id(), table.layout.layout_id());
    const std::vector<double> scores = model::score(model, table.rows);
    batch.n_scored = static_cast<int>(scores.size());

    std::vector<std::size_t> order(scores.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::vector<std::string> ids;
    ids.reserve(table.rows.size());
    for (const auto& r : table.rows) ids.push_back(r.key.id());
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (scores[a] != scores[b]) return scores[a] > scores[b];
      return ids[a] < ids[b];
    });
    order.resize(std::min<std::size_t>(order.size(), static_cast<std::size_t>(top_n)));

    for (std::size_t r = 0; r < order.size(); ++r) {
      const auto& row = table.rows[order[r]];
      CaseRecord c;
      c.key = row.key;
      c.window = window;
      c.case_id = make_case_id(row.key, window);
      c.score = scores[order[r]];
      c.rank = static_cast<int>(r + 1);
      auto add = [&](const RelationshipKey& k, const char* direction) {
        auto it = rels.find(k);
        if (it == rels.end()) return;
        for (const auto& t : it->second.transactions)
          c.evidence.push_back({direction, t.txn_id, t.timestamp, t.amount_cents, t.description});
      };
      add(row.key, "forward");
      add(row.key.reversed(), "reply");
      std::sort(c.evidence.begin(), c.evidence.end(), [](const EvidenceItem& a, const EvidenceItem& b) {
        if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
        return a.txn_id < b.txn_id;
      });
      batch.cases.push_back(std::move(c));
    }
  }

  util::Fnv1a64 h;
  h.update(window.start.to_string()).separator().update(window.end.to_string()).separator();
  h.update(model.layout_id()).separator().update(std::to_string(top_n)).separator();
  for (const auto& c : batch.cases) h.update(c.case_id).separator().update(util::format_double(c.score)).separator();
  batch.batch_id = "batch-" + window.start.to_string() + "-" + util::to_hex(h.digest()).substr(0, 8);
  return batch;
}

BatchStore::BatchStore(fs::path root) : root_(std::move(root)) {
  std::error_code ec;
  fs::create_directories(root_ / "batches", ec);
  if (ec) throw IoError("cannot create " + (root_ / "batches").string() + ": " + ec.message());
  load_all();
}

void BatchStore::load_all() {
  std::map<std::string, Batch> batches;
  for (const auto& entry : fs::directory_iterator(root_ / "batches")) {
    if (entry.path().extension() != ".json") continue;
    std::ifstream in(entry.path());
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError("malformed batch file " + entry.path().string() + ": " + e.what());
    }
    Batch b = batch_from_json(j);
    batches[b.batch_id] = std::move(b);
  }
  std::map<std::string, std::pair<std::string, std::size_t>> index;
  for (const auto& [id, b] : batches)
    for (std::size_t i = 0; i < b.cases.size(); ++i) index.emplace(b.cases[i].case_id, std::make_pair(id, i));
  batches_ = std::move(batches);
  case_index_ = std::move(index);
}

void BatchStore::save(const Batch& batch) {
  std::unique_lock lock(mutex_);
  const fs::path target = root_ / "batches" / (batch.batch_id + ".json");
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << to_json(batch).dump(2) << '\n';
    if (!out.flush()) throw IoError("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) throw IoError("cannot move batch into place: " + ec.message());
  batches_[batch.batch_id] = batch;
  for (auto& c : batches_[batch.batch_id].cases) c.review.reset();
  for (std::size_t i = 0; i < batch.cases.size(); ++i)
    case_index_.emplace(batch.cases[i].case_id, std::make_pair(batch.batch_id, i));
}

std::vector<std::string> BatchStore::list() const {
  std::shared_lock lock(mutex_);
  std::vector<std::string> ids;
  for (const auto& [id, b] : batches_) ids.push_back(id);
  return ids;
}

Batch BatchStore::get(const std::string& batch_id) const {
  std::shared_lock lock(mutex_);
  auto it = batches_.find(batch_id);
  if (it == batches_.end()) throw NotFoundError("unknown batch '" + batch_id + "'");
  return it->second;
}

std::pair<std::string, CaseRecord> BatchStore::find_case(const std::string& case_id) const {
  std::shared_lock lock(mutex_);
  auto it = case_index_.find(case_id);
  if (it == case_index_.end()) throw NotFoundError("unknown case '" + case_id + "'");
  return {it->second.first, batches_.at(it->second.first).cases[it->second.second]};
}

bool BatchStore::has_case(const std::string& case_id) const {
  std::shared_lock lock(mutex_);
  return case_index_.count(case_id) > 0;
}

}  // namespace txguard::service
