#include "txguard/service/label_store.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

#include "txguard/core/ingest.hpp"
#include "txguard/util/error.hpp"

namespace txguard::service {

nlohmann::json LabelEvent::to_json() const {
  return {{"case_id", case_id},
          {"label", to_string(label)},
          {"reviewer_id", reviewer_id},
          {"decided_at", decided_at.to_rfc3339()}};
}

LabelEvent LabelEvent::from_json(const nlohmann::json& j) {
  try {
    LabelEvent e;
    e.case_id = j.at("case_id").get<std::string>();
    e.label = parse_review_label(j.at("label").get<std::string>());
    e.reviewer_id = j.at("reviewer_id").get<std::string>();
    e.decided_at = Timestamp::parse_rfc3339(j.at("decided_at").get<std::string>());
    return e;
  } catch (const nlohmann::json::exception& ex) {
    throw ValidationError(std::string("malformed label event: ") + ex.what());
  }
}

Timestamp system_now() {
  using namespace std::chrono;
  return Timestamp(duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count());
}

LabelStore::LabelStore(std::filesystem::path path, Clock clock) : path_(std::move(path)), clock_(std::move(clock)) {
  std::ifstream in(path_, std::ios::binary);
  if (!in) return;  // created on first write
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::size_t pos = 0, line_no = 0;
  while (pos < content.size()) {
    std::size_t nl = content.find('\n', pos);
    const bool torn = nl == std::string::npos;
    const std::size_t line_start = pos;
    std::string line = content.substr(pos, torn ? std::string::npos : nl - pos);
    pos = torn ? content.size() : nl + 1;
    ++line_no;
    if (line.empty()) continue;
    try {
      events_.push_back(LabelEvent::from_json(nlohmann::json::parse(line)));
    } catch (const std::exception& e) {
      // A crash mid-append can leave a partial final line; that event was
      // never acknowledged, so dropping it is safe. Anything else is corruption.
      // Cut it off so the next append starts on a fresh line.
      if (torn) {
        std::filesystem::resize_file(path_, line_start);
        break;
      }
      throw ValidationError(path_.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

LabelEvent LabelStore::record(const std::string& case_id, ReviewLabel label, const std::string& reviewer_id) {
  if (case_id.empty()) throw ValidationError("case_id is required");
  if (reviewer_id.empty()) throw ValidationError("reviewer_id is required");
  if (reviewer_id.size() > 200) throw ValidationError("reviewer_id is too long");

  std::lock_guard lock(mutex_);
  LabelEvent e{case_id, label, reviewer_id, clock_()};
  const std::string line = e.to_json().dump() + "\n";
  const int fd = ::open(path_.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd < 0) throw IoError("cannot open " + path_.string() + ": " + std::strerror(errno));
  std::size_t written = 0;
  while (written < line.size()) {
    ssize_t n = ::write(fd, line.data() + written, line.size() - written);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) {
      const int err = errno;
      ::close(fd);
      throw IoError("cannot append to " + path_.string() + ": " + std::strerror(err));
    }
    written += static_cast<std::size_t>(n);
  }
  const bool synced = ::fsync(fd) == 0;
  ::close(fd);
  if (!synced) throw IoError("fsync failed for " + path_.string());
  events_.push_back(e);
  return e;
}

std::vector<LabelEvent> LabelStore::events() const {
  std::lock_guard lock(mutex_);
  return events_;
}

std::vector<LabelEvent> LabelStore::history(const std::string& case_id) const {
  std::lock_guard lock(mutex_);
  std::vector<LabelEvent> out;
  for (const auto& e : events_)
    if (e.case_id == case_id) out.push_back(e);
  return out;
}

std::optional<LabelEvent> LabelStore::latest(const std::string& case_id) const {
  std::lock_guard lock(mutex_);
  for (auto it = events_.rbegin(); it != events_.rend(); ++it)
    if (it->case_id == case_id) return *it;
  return std::nullopt;
}

std::vector<LabeledRelationship> export_training_labels(const BatchStore& batches, const LabelStore& labels,
                                                        std::span<const std::string> batch_ids) {
  std::vector<std::string> ids(batch_ids.begin(), batch_ids.end());
  if (ids.empty()) ids = batches.list();
  std::set<std::string> seen;
  std::vector<LabeledRelationship> out;
  for (const auto& id : ids) {
    const Batch b = batches.get(id);
    for (const auto& c : b.cases) {
      if (!seen.insert(c.case_id).second) continue;
      auto e = labels.latest(c.case_id);
      if (!e || e->label == ReviewLabel::kUncertain) continue;
      out.push_back({c.key, c.window, e->label == ReviewLabel::kAbusive ? 1 : 0, LabelSource::kReviewer});
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.key.id() < b.key.id(); });
  return out;
}

std::string export_training_labels_csv(const BatchStore& batches, const LabelStore& labels,
                                       std::span<const std::string> batch_ids) {
  std::ostringstream out;
  write_labels(out, export_training_labels(batches, labels, batch_ids));
  return out.str();
}

}  // namespace txguard::service
