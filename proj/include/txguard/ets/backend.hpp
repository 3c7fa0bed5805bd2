#pragma once

#include <memory>
#include <optional>
#include <mutex>
#include <shared_mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "txguard/ets/scores.hpp"

namespace txguard::ets {

struct BackendInfo {
  std::string name;
  std::string version;
  bool deterministic = true;
  std::string notes;

  std::string cache_key() const { return name + "@" + version; }
};

// Scores descriptions positionally: result[i] belongs to texts[i].
class ScorerBackend {
 public:
  virtual ~ScorerBackend() = default;
  virtual const BackendInfo& info() const = 0;
  virtual std::vector<EtsScores> score(std::span<const std::string> texts) = 0;
};

// Adapter for an external model process. Each call spawns `command` through
// /bin/sh, writes {"texts": [...]} to its stdin and reads
// {"results": [{"toxicity": {...}, "emotion": {...}, "sentiment": {...}}]}
// from its stdout. See docs/adapter.md.
class SubprocessBackend final : public ScorerBackend {
 public:
  SubprocessBackend(std::string name, std::string version, std::string command);

  const BackendInfo& info() const override { return info_; }
  std::vector<EtsScores> score(std::span<const std::string> texts) override;

 private:
  BackendInfo info_;
  std::string command_;
};

nlohmann::json to_json(const EtsScores& scores);
EtsScores ets_from_json(const nlohmann::json& j);  // throws ValidationError

// Shared cache keyed by (backend name@version, exact text).
class ScoreCache {
 public:
  std::optional<EtsScores> find(const std::string& backend_key, const std::string& text) const;
  void insert(const std::string& backend_key, const std::string& text, const EtsScores& scores);
  std::size_t size() const;

 private:
  mutable std::shared_mutex mutex_;
  std::unordered_map<std::string, std::unordered_map<std::string, EtsScores>> entries_;
};

// Scores a batch with one backend invocation covering the distinct uncached
// texts. Backend failures surface as BackendError; there is no fallback to a
// different backend.
std::vector<EtsScores> score_batch(std::span<const std::string> texts, ScorerBackend& backend,
                                   ScoreCache* cache = nullptr);

}  // namespace txguard::ets
