#pragma once

#include <memory>
#include <string>

#include "miohint/harness/service.hpp"

namespace miohint {

// Serves a ServiceInstance over HTTP: the spec'd endpoints plus the control
// endpoints GET /__coverage and POST /__reset. Requests are handled one at a
// time so coverage deltas stay attributable.
class HttpServer {
 public:
  // Binds immediately; port 0 picks a free port. Throws BindError.
  HttpServer(ServiceInstance& service, const std::string& host, int port);
  ~HttpServer();

  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  int port() const { return port_; }
  std::string base_url() const;
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::string host_;
  int port_ = 0;
};

// Drives a served instance over the wire with the same evaluate contract as
// InProcessEvaluator (reset, run actions, snapshot).
class HttpEvaluator : public Evaluator {
 public:
  explicit HttpEvaluator(std::string base_url) : base_url_(std::move(base_url)) {}
  ExecutionResult evaluate(const TestCase& tc) override;

  // Single-action round trip returning (status, body, coverage delta).
  RequestOutcome send(const RestCallAction& action);
  void reset();
  nlohmann::json coverage();

 private:
  std::string base_url_;
};

}  // namespace miohint
