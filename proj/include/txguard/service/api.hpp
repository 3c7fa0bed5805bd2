#pragma once

#include <map>
#include <memory>
#include <string>

#include "txguard/service/batch.hpp"
#include "txguard/service/label_store.hpp"

namespace txguard::service {

struct HttpRequest {
  std::string method;  // "GET", "POST", ...
  std::string path;    // decoded, without query string
  std::map<std::string, std::string> query;
  std::string body;
};

struct HttpResponse {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

// Routes the review API. Transport-free so it can be tested without sockets.
//   GET  /health
//   GET  /batches
//   GET  /batches/{id}
//   GET  /batches/{id}/cases?limit=
//   GET  /cases/{case_id}
//   POST /cases/{case_id}/label   {"label": ..., "reviewer_id": ...}
//   GET  /export/labels?batch=id[,id...]
//   GET  /export/events          (full label event log, JSONL)
// Errors come back as {"error": message} with 400 or 404.
class ReviewApi {
 public:
  ReviewApi(BatchStore& batches, LabelStore& labels) : batches_(batches), labels_(labels) {}

  HttpResponse handle(const HttpRequest& request) const;

 private:
  CaseRecord with_review(CaseRecord c) const;

  BatchStore& batches_;
  LabelStore& labels_;
};

// httplib transport around ReviewApi.
class HttpServer {
 public:
  explicit HttpServer(const ReviewApi& api);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // port 0 picks a free port. Returns the bound port; throws IoError.
  int bind(const std::string& host, int port);
  // Blocks until stop().
  void run();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace txguard::service
