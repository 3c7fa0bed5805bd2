#include "txguard/ets/backend.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <unordered_set>

#include "txguard/util/error.hpp"

namespace txguard::ets {

using nlohmann::json;

json to_json(const EtsScores& scores) {
  json tox = json::object(), emo = json::object();
  for (std::size_t i = 0; i < kNumToxicity; ++i) tox[std::string(kToxicityNames[i])] = scores.toxicity.values[i];
  for (std::size_t i = 0; i < kNumEmotion; ++i) emo[std::string(kEmotionNames[i])] = scores.emotion.values[i];
  const auto& s = scores.sentiment;
  return {{"toxicity", tox},
          {"emotion", emo},
          {"sentiment", {{"positive", s.positive}, {"negative", s.negative}, {"neutral", s.neutral}, {"compound", s.compound}}}};
}

namespace {

double number_field(const json& obj, std::string_view group, std::string_view name) {
  auto it = obj.find(std::string(name));
  if (it == obj.end() || !it->is_number())
    throw ValidationError("missing numeric field " + std::string(group) + "." + std::string(name));
  return it->get<double>();
}

const json& object_field(const json& obj, const char* name) {
  auto it = obj.find(name);
  if (it == obj.end() || !it->is_object()) throw ValidationError(std::string("missing object '") + name + "'");
  return *it;
}

}  // namespace

EtsScores ets_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("score record must be an object");
  EtsScores out;
  const json& tox = object_field(j, "toxicity");
  const json& emo = object_field(j, "emotion");
  const json& sent = object_field(j, "sentiment");
  for (std::size_t i = 0; i < kNumToxicity; ++i) out.toxicity.values[i] = number_field(tox, "toxicity", kToxicityNames[i]);
  for (std::size_t i = 0; i < kNumEmotion; ++i) out.emotion.values[i] = number_field(emo, "emotion", kEmotionNames[i]);
  out.sentiment.positive = number_field(sent, "sentiment", "positive");
  out.sentiment.negative = number_field(sent, "sentiment", "negative");
  out.sentiment.neutral = number_field(sent, "sentiment", "neutral");
  out.sentiment.compound = number_field(sent, "sentiment", "compound");
  validate(out);
  return out;
}

SubprocessBackend::SubprocessBackend(std::string name, std::string version, std::string command)
    : command_(std::move(command)) {
  info_.name = std::move(name);
  info_.version = std::move(version);
  info_.deterministic = true;
  info_.notes = "external adapter: " + command_;
}

namespace {

// Runs `command` with `input` on stdin and returns everything written to
// stdout. Uses poll so large payloads in either direction cannot deadlock.
std::string run_filter(const std::string& command, const std::string& input, const std::string& backend, int& status) {
  int to_child[2], from_child[2];
  if (pipe(to_child) != 0) throw BackendError(backend, std::string("pipe: ") + std::strerror(errno));
  if (pipe(from_child) != 0) {
    close(to_child[0]);
    close(to_child[1]);
    throw BackendError(backend, std::string("pipe: ") + std::strerror(errno));
  }
  pid_t pid = fork();
  if (pid < 0) throw BackendError(backend, std::string("fork: ") + std::strerror(errno));
  if (pid == 0) {
    dup2(to_child[0], STDIN_FILENO);
    dup2(from_child[1], STDOUT_FILENO);
    close(to_child[0]);
    close(to_child[1]);
    close(from_child[0]);
    close(from_child[1]);
    execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  close(to_child[0]);
  close(from_child[1]);
  fcntl(to_child[1], F_SETFL, O_NONBLOCK);

  // A child that exits early must not kill us with SIGPIPE.
  struct sigaction ignore {}, previous {};
  ignore.sa_handler = SIG_IGN;
  sigaction(SIGPIPE, &ignore, &previous);

  std::string output;
  std::size_t written = 0;
  int write_fd = to_child[1];
  if (input.empty()) {
    close(write_fd);
    write_fd = -1;
  }
  char buf[65536];
  bool reading = true;
  while (reading) {
    pollfd fds[2];
    nfds_t n = 0;
    fds[n++] = {from_child[0], POLLIN, 0};
    if (write_fd >= 0) fds[n++] = {write_fd, POLLOUT, 0};
    if (poll(fds, n, -1) < 0) {
      if (errno == EINTR) continue;
      break;
    }
    if (n == 2 && (fds[1].revents & (POLLOUT | POLLERR | POLLHUP))) {
      ssize_t w = write(write_fd, input.data() + written, input.size() - written);
      if (w > 0) written += static_cast<std::size_t>(w);
      if (w < 0 && errno != EAGAIN && errno != EINTR) written = input.size();
      if (written >= input.size()) {
        close(write_fd);
        write_fd = -1;
      }
    }
    if (fds[0].revents & (POLLIN | POLLHUP | POLLERR)) {
      ssize_t r = read(from_child[0], buf, sizeof buf);
      if (r > 0) {
        output.append(buf, static_cast<std::size_t>(r));
      } else if (r == 0 || (errno != EINTR && errno != EAGAIN)) {
        reading = false;
      }
    }
  }
  if (write_fd >= 0) close(write_fd);
  close(from_child[0]);
  waitpid(pid, &status, 0);
  sigaction(SIGPIPE, &previous, nullptr);
  return output;
}

}  // namespace

std::vector<EtsScores> SubprocessBackend::score(std::span<const std::string> texts) {
  json request = {{"texts", json::array()}};
  for (const auto& t : texts) request["texts"].push_back(t);
  int status = 0;
  std::string output = run_filter(command_, request.dump() + "\n", info_.name, status);
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0)
    throw BackendError(info_.name, "adapter process failed (status " + std::to_string(status) + ")");
  json response;
  try {
    response = json::parse(output);
  } catch (const json::exception& e) {
    throw BackendError(info_.name, std::string("unparseable adapter response: ") + e.what());
  }
  if (!response.is_object() || !response.contains("results") || !response["results"].is_array())
    throw BackendError(info_.name, "adapter response lacks a 'results' array");
  const json& results = response["results"];
  if (results.size() != texts.size())
    throw BackendError(info_.name, "adapter returned " + std::to_string(results.size()) + " results for " +
                                       std::to_string(texts.size()) + " texts");
  std::vector<EtsScores> out;
  out.reserve(texts.size());
  for (const json& r : results) {
    try {
      out.push_back(ets_from_json(r));
    } catch (const ValidationError& e) {
      throw BackendError(info_.name, e.what());
    }
  }
  return out;
}

std::optional<EtsScores> ScoreCache::find(const std::string& backend_key, const std::string& text) const {
  std::shared_lock lock(mutex_);
  auto b = entries_.find(backend_key);
  if (b == entries_.end()) return std::nullopt;
  auto it = b->second.find(text);
  if (it == b->second.end()) return std::nullopt;
  return it->second;
}

void ScoreCache::insert(const std::string& backend_key, const std::string& text, const EtsScores& scores) {
  std::unique_lock lock(mutex_);
  entries_[backend_key].try_emplace(text, scores);
}

std::size_t ScoreCache::size() const {
  std::shared_lock lock(mutex_);
  std::size_t n = 0;
  for (const auto& [key, m] : entries_) n += m.size();
  return n;
}

std::vector<EtsScores> score_batch(std::span<const std::string> texts, ScorerBackend& backend, ScoreCache* cache) {
  if (texts.empty()) return {};
  ScoreCache local;
  ScoreCache& store = cache ? *cache : local;
  const std::string key = backend.info().cache_key();

  std::vector<std::string> pending;
  std::unordered_set<std::string_view> queued;
  for (const auto& t : texts) {
    if (queued.count(t) || store.find(key, t)) continue;
    queued.insert(t);
    pending.push_back(t);
  }
  if (!pending.empty()) {
    std::vector<EtsScores> fresh = backend.score(pending);
    if (fresh.size() != pending.size())
      throw BackendError(backend.info().name, "returned " + std::to_string(fresh.size()) + " results for " +
                                                  std::to_string(pending.size()) + " texts");
    for (std::size_t i = 0; i < pending.size(); ++i) store.insert(key, pending[i], fresh[i]);
  }

  std::vector<EtsScores> out;
  out.reserve(texts.size());
  for (const auto& t : texts) {
    auto hit = store.find(key, t);
    if (!hit) throw BackendError(backend.info().name, "score missing after batch");
    out.push_back(*hit);
  }
  return out;
}

}  // namespace txguard::ets
