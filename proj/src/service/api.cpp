#include "txguard/service/api.hpp"

#include <httplib.h>

#include <charconv>

#include "txguard/util/error.hpp"
#include "txguard/version.hpp"

namespace txguard::service {

namespace {

HttpResponse json_response(int status, const nlohmann::json& body) {
  return {status, "application/json", body.dump() + "\n"};
}

HttpResponse error_response(int status, const std::string& message) {
  return json_response(status, {{"error", message}});
}

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (start < path.size()) {
    std::size_t end = path.find('/', start);
    if (end == std::string::npos) end = path.size();
    if (end > start) parts.push_back(path.substr(start, end - start));
    start = end + 1;
  }
  return parts;
}

int parse_limit(const std::string& text) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || value < 0)
    throw ValidationError("limit must be a non-negative integer");
  return value;
}

nlohmann::json batch_summary(const Batch& b) {
  return {{"batch_id", b.batch_id},       {"window_start", b.window.start.to_string()},
          {"window_end", b.window.end.to_string()}, {"layout_id", b.layout_id},
          {"model_version", b.model_version}, {"top_n", b.top_n},
          {"n_scored", b.n_scored},       {"n_cases", b.cases.size()}};
}

}  // namespace

CaseRecord ReviewApi::with_review(CaseRecord c) const {
  if (auto e = labels_.latest(c.case_id)) c.review = Review{e->label, e->reviewer_id, e->decided_at};
  return c;
}

HttpResponse ReviewApi::handle(const HttpRequest& req) const {
  const auto parts = split_path(req.path);
  const bool get = req.method == "GET";
  const bool post = req.method == "POST";
  try {
    if (get && parts.size() == 1 && parts[0] == "health")
      return json_response(200, {{"status", "ok"}, {"version", kToolVersion}, {"batches", batches_.list().size()}});

    if (!parts.empty() && parts[0] == "batches") {
      if (get && parts.size() == 1) {
        nlohmann::json out = nlohmann::json::array();
        for (const auto& id : batches_.list()) out.push_back(batch_summary(batches_.get(id)));
        return json_response(200, {{"batches", out}});
      }
      if (get && parts.size() == 2) return json_response(200, batch_summary(batches_.get(parts[1])));
      if (get && parts.size() == 3 && parts[2] == "cases") {
        const Batch b = batches_.get(parts[1]);
        std::size_t limit = b.cases.size();
        if (auto it = req.query.find("limit"); it != req.query.end())
          limit = std::min(limit, static_cast<std::size_t>(parse_limit(it->second)));
        nlohmann::json cases = nlohmann::json::array();
        for (std::size_t i = 0; i < limit; ++i) cases.push_back(case_summary_json(with_review(b.cases[i])));
        return json_response(200, {{"batch_id", b.batch_id}, {"total", b.cases.size()}, {"cases", cases}});
      }
    }

    if (!parts.empty() && parts[0] == "cases" && parts.size() >= 2) {
      const std::string& case_id = parts[1];
      if (get && parts.size() == 2) {
        auto [batch_id, c] = batches_.find_case(case_id);
        nlohmann::json j = to_json(with_review(std::move(c)));
        j["batch_id"] = batch_id;
        nlohmann::json history = nlohmann::json::array();
        for (const auto& e : labels_.history(case_id)) history.push_back(e.to_json());
        j["label_history"] = history;
        return json_response(200, j);
      }
      if (post && parts.size() == 3 && parts[2] == "label") {
        if (!batches_.has_case(case_id)) throw NotFoundError("unknown case '" + case_id + "'");
        nlohmann::json body;
        try {
          body = nlohmann::json::parse(req.body);
        } catch (const nlohmann::json::exception&) {
          throw ValidationError("request body must be JSON");
        }
        if (!body.is_object() || !body.contains("label") || !body["label"].is_string())
          throw ValidationError("field 'label' (string) is required");
        if (!body.contains("reviewer_id") || !body["reviewer_id"].is_string())
          throw ValidationError("field 'reviewer_id' (string) is required");
        const ReviewLabel label = parse_review_label(body["label"].get<std::string>());
        const LabelEvent e = labels_.record(case_id, label, body["reviewer_id"].get<std::string>());
        auto [batch_id, c] = batches_.find_case(case_id);
        nlohmann::json j = to_json(with_review(std::move(c)));
        j["batch_id"] = batch_id;
        return json_response(201, {{"event", e.to_json()}, {"case", j}});
      }
    }

    if (get && parts.size() == 2 && parts[0] == "export") {
      if (parts[1] == "labels") {
        std::vector<std::string> ids;
        if (auto it = req.query.find("batch"); it != req.query.end()) {
          std::size_t start = 0;
          const std::string& v = it->second;
          while (start <= v.size()) {
            std::size_t end = v.find(',', start);
            if (end == std::string::npos) end = v.size();
            if (end > start) ids.push_back(v.substr(start, end - start));
            start = end + 1;
          }
        }
        return {200, "text/csv; charset=utf-8", export_training_labels_csv(batches_, labels_, ids)};
      }
      if (parts[1] == "events") {
        std::string body;
        for (const auto& e : labels_.events()) body += e.to_json().dump() + "\n";
        return {200, "application/x-ndjson", body};
      }
    }
    return error_response(404, "no route for " + req.method + " " + req.path);
  } catch (const NotFoundError& e) {
    return error_response(404, e.what());
  } catch (const ValidationError& e) {
    return error_response(400, e.what());
  }
}

struct HttpServer::Impl {
  explicit Impl(const ReviewApi& a) : api(a) {}
  const ReviewApi& api;
  httplib::Server server;
};

HttpServer::HttpServer(const ReviewApi& api) : impl_(std::make_unique<Impl>(api)) {
  auto handler = [this](const httplib::Request& req, httplib::Response& res) {
    HttpRequest r;
    r.method = req.method;
    r.path = req.path;
    for (const auto& [k, v] : req.params) r.query[k] = v;
    r.body = req.body;
    HttpResponse out;
    try {
      out = impl_->api.handle(r);
    } catch (const std::exception& e) {
      out = {500, "application/json", nlohmann::json{{"error", e.what()}}.dump() + "\n"};
    }
    res.status = out.status;
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_content(out.body, out.content_type);
  };
  impl_->server.Get(R"(/.*)", handler);
  impl_->server.Post(R"(/.*)", handler);
  impl_->server.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.status = 204;
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
  });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = impl_->server.bind_to_any_port(host);
    if (bound < 0) throw IoError("cannot bind " + host);
    return bound;
  }
  if (!impl_->server.bind_to_port(host, port)) throw IoError("cannot bind " + host + ":" + std::to_string(port));
  return port;
}

void HttpServer::run() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_) impl_->server.stop();
}

}  // namespace txguard::service
