#include "miohint/harness/http.hpp"

#include <chrono>
#include <mutex>
#include <thread>

#include <httplib.h>

#include "miohint/errors.hpp"

namespace miohint {

namespace {

std::optional<HttpVerb> verb_of_method(const std::string& m) {
  return parse_verb(m);
}

}  // namespace

struct HttpServer::Impl {
  httplib::Server server;
  std::thread thread;
  std::mutex mutex;  // serializes request handling
};

HttpServer::HttpServer(ServiceInstance& service, const std::string& host, int port)
    : impl_(std::make_unique<Impl>()), host_(host) {
  auto* impl = impl_.get();

  auto handle = [this, &service](const httplib::Request& req, httplib::Response& res) {
    std::lock_guard<std::mutex> lock(impl_->mutex);

    if (req.method == "POST" && req.path == "/__reset") {
      service.reset_coverage();
      res.status = 200;
      res.set_content("{\"ok\":true}", "application/json");
      return;
    }
    if (req.method == "GET" && req.path == "/__coverage") {
      res.status = 200;
      res.set_content(service.coverage_json().dump(), "application/json");
      return;
    }

    auto verb = verb_of_method(req.method);
    if (!verb) {
      res.status = 404;
      res.set_content("{\"error\":\"unsupported method\"}", "application/json");
      return;
    }
    std::map<std::string, std::string> query;
    for (const auto& [k, v] : req.params) query.emplace(k, v);
    std::vector<std::pair<std::string, std::string>> headers(req.headers.begin(),
                                                             req.headers.end());
    nlohmann::json body;
    if (!req.body.empty()) {
      body = nlohmann::json::parse(req.body, nullptr, false);
      if (body.is_discarded()) body = nullptr;
    }
    RequestOutcome out = service.handle_wire(*verb, req.path, query, headers, body);
    res.status = out.status;
    res.set_content(out.body.dump(), "application/json");
  };

  // One catch-all matcher per verb; routing happens in handle_wire.
  impl->server.Get(R"((.*))", handle);
  impl->server.Post(R"((.*))", handle);
  impl->server.Put(R"((.*))", handle);
  impl->server.Delete(R"((.*))", handle);

  if (port == 0) {
    port_ = impl->server.bind_to_any_port(host.c_str());
    if (port_ <= 0) throw BindError("cannot bind to " + host);
  } else {
    if (!impl->server.bind_to_port(host.c_str(), port))
      throw BindError("cannot bind to " + host + ":" + std::to_string(port));
    port_ = port;
  }
  impl->thread = std::thread([impl] { impl->server.listen_after_bind(); });
  impl->server.wait_until_ready();
}

HttpServer::~HttpServer() { stop(); }

void HttpServer::stop() {
  if (impl_ && impl_->thread.joinable()) {
    impl_->server.stop();
    impl_->thread.join();
  }
}

std::string HttpServer::base_url() const {
  return "http://" + host_ + ":" + std::to_string(port_);
}

RequestOutcome HttpEvaluator::send(const RestCallAction& action) {
  httplib::Client client(base_url_);
  client.set_connection_timeout(10, 0);
  client.set_read_timeout(30, 0);

  httplib::Headers headers;
  for (const auto& [k, v] : action.headers) headers.emplace(k, v.to_wire_string());

  httplib::Params params;
  for (const auto& [k, v] : action.query_params) params.emplace(k, v.to_wire_string());

  std::string path = action.rendered_path();
  std::string query = httplib::detail::params_to_query_str(params);
  std::string target = query.empty() ? path : path + "?" + query;

  std::string body = action.body.tag() == ValueTag::Null ? "" : action.body.to_json().dump();

  httplib::Result res;
  switch (action.verb) {
    case HttpVerb::Get: res = client.Get(target, headers); break;
    case HttpVerb::Post: res = client.Post(target, headers, body, "application/json"); break;
    case HttpVerb::Put: res = client.Put(target, headers, body, "application/json"); break;
    case HttpVerb::Delete: res = client.Delete(target, headers, body, "application/json"); break;
  }
  if (!res) throw Error("harness: transport failure talking to " + base_url_);

  RequestOutcome out;
  out.status = res->status;
  auto j = nlohmann::ordered_json::parse(res->body, nullptr, false);
  if (!j.is_discarded()) out.body = j;
  return out;
}

void HttpEvaluator::reset() {
  httplib::Client client(base_url_);
  auto res = client.Post("/__reset", "", "application/json");
  if (!res || res->status != 200) throw Error("harness: /__reset failed");
}

nlohmann::json HttpEvaluator::coverage() {
  httplib::Client client(base_url_);
  auto res = client.Get("/__coverage");
  if (!res || res->status != 200) throw Error("harness: /__coverage failed");
  auto j = nlohmann::json::parse(res->body, nullptr, false);
  if (j.is_discarded()) throw Error("harness: /__coverage returned invalid JSON");
  return j;
}

ExecutionResult HttpEvaluator::evaluate(const TestCase& tc) {
  auto start = std::chrono::steady_clock::now();
  reset();
  ExecutionResult result;
  for (const auto& action : tc.actions) result.statuses.push_back(send(action).status);
  nlohmann::json cov = coverage();
  for (const auto& id : cov["covered_targets"])
    result.snapshot.covered_targets.insert(parse_target_id(id.get<std::string>()));
  for (const auto& l : cov["covered_lines"])
    result.snapshot.covered_lines.insert({l[0].get<std::string>(), l[1].get<int>()});
  if (cov.contains("scores"))
    for (auto it = cov["scores"].begin(); it != cov["scores"].end(); ++it)
      result.scores[parse_target_id(it.key())] = it.value().get<double>();
  result.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  return result;
}

}  // namespace miohint
