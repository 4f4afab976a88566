#include "miohint/llm/backend.hpp"

#include <cstdlib>
#include <fstream>
#include <map>

#include <httplib.h>
#include <json.hpp>

#include "miohint/llm/solver_oracle.hpp"
#include "miohint/util/sha256.hpp"

namespace miohint::llm {

void BackendConfig::validate() const {
  if (timeout_ms <= 0) throw BackendConfigError("backend: timeout must be positive");
  if (max_retries < 0) throw BackendConfigError("backend: max_retries must be >= 0");
  if (mode == BackendMode::RemoteChat && endpoint_url.empty())
    throw BackendConfigError("backend: remote mode needs an endpoint URL");
  if (mode == BackendMode::Scripted && script_path.empty())
    throw BackendConfigError("backend: scripted mode needs a transcript file");
}

BackendConfig BackendConfig::parse_cli(const std::string& arg) {
  BackendConfig cfg;
  if (arg == "solver") {
    cfg.mode = BackendMode::SolverOracle;
  } else if (arg.rfind("scripted:", 0) == 0) {
    cfg.mode = BackendMode::Scripted;
    cfg.script_path = arg.substr(9);
  } else if (arg.rfind("remote:", 0) == 0) {
    cfg.mode = BackendMode::RemoteChat;
    cfg.endpoint_url = arg.substr(7);
  } else {
    throw BackendConfigError("backend: expected solver | scripted:<file> | remote:<url>, got '" +
                             arg + "'");
  }
  cfg.validate();
  return cfg;
}

std::string BackendConfig::describe() const {
  switch (mode) {
    case BackendMode::SolverOracle: return "solver";
    case BackendMode::Scripted: return "scripted:" + script_path;
    case BackendMode::RemoteChat: return "remote:" + endpoint_url;
  }
  return "?";
}

namespace {

class ScriptedBackend : public Backend {
 public:
  explicit ScriptedBackend(const BackendConfig& cfg) : path_(cfg.script_path) {
    std::ifstream in(path_);
    if (!in) throw BackendConfigError("scripted backend: cannot open " + path_);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
      if (j.is_discarded() || !j.contains("prompt_sha256") || !j.contains("response_text"))
        throw BackendConfigError("scripted backend: malformed record in " + path_);
      // First record wins so replays stay repeatable.
      responses_.emplace(j["prompt_sha256"].get<std::string>(),
                         j["response_text"].get<std::string>());
    }
  }

  std::string query(const Prompt& prompt) override {
    std::string key = sha256_hex(prompt.render());
    auto it = responses_.find(key);
    if (it == responses_.end())
      throw BackendError(BackendError::Kind::MissingTranscript,
                         "scripted backend: no transcript entry for prompt " + key);
    return it->second;
  }

 private:
  std::string path_;
  std::map<std::string, std::string> responses_;
};

class RemoteChatBackend : public Backend {
 public:
  explicit RemoteChatBackend(BackendConfig cfg) : cfg_(std::move(cfg)) {
    // Split scheme://host[:port] from the request path.
    auto scheme = cfg_.endpoint_url.find("://");
    if (scheme == std::string::npos)
      throw BackendConfigError("remote backend: URL must include a scheme: " + cfg_.endpoint_url);
    auto path_start = cfg_.endpoint_url.find('/', scheme + 3);
    if (path_start == std::string::npos) {
      base_ = cfg_.endpoint_url;
      path_ = "/";
    } else {
      base_ = cfg_.endpoint_url.substr(0, path_start);
      path_ = cfg_.endpoint_url.substr(path_start);
    }
  }

  std::string query(const Prompt& prompt) override {
    BackendError last(BackendError::Kind::Transport, "remote backend: not attempted");
    for (int attempt = 0; attempt <= cfg_.max_retries; ++attempt) {
      try {
        return query_once(prompt);
      } catch (const BackendError& e) {
        last = e;
      }
    }
    throw last;
  }

 private:
  std::string query_once(const Prompt& prompt) {
    httplib::Client client(base_);
    client.set_connection_timeout(0, cfg_.timeout_ms * 1000);
    client.set_read_timeout(cfg_.timeout_ms / 1000, (cfg_.timeout_ms % 1000) * 1000);

    nlohmann::ordered_json body;
    body["model"] = cfg_.model;
    body["temperature"] = cfg_.temperature;
    body["messages"] = nlohmann::json::array();
    body["messages"].push_back({{"role", "user"}, {"content", prompt.render()}});

    httplib::Headers headers;
    if (const char* key = std::getenv(cfg_.api_key_env.c_str()); key && *key)
      headers.emplace("Authorization", std::string("Bearer ") + key);

    auto res = client.Post(path_, headers, body.dump(), "application/json");
    if (!res) {
      auto err = res.error();
      if (err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read)
        throw BackendError(BackendError::Kind::Timeout,
                           "remote backend: timeout talking to " + base_);
      throw BackendError(BackendError::Kind::Transport,
                         "remote backend: transport failure (" + httplib::to_string(err) + ")");
    }
    if (res->status < 200 || res->status >= 300)
      throw BackendError(BackendError::Kind::NonSuccessStatus,
                         "remote backend: HTTP " + std::to_string(res->status));

    nlohmann::json j = nlohmann::json::parse(res->body, nullptr, false);
    if (j.is_discarded() || !j.contains("choices") || j["choices"].empty() ||
        !j["choices"][0].contains("message") || !j["choices"][0]["message"].contains("content"))
      throw BackendError(BackendError::Kind::Transport,
                         "remote backend: response is not chat-completions shaped");
    return j["choices"][0]["message"]["content"].get<std::string>();
  }

  BackendConfig cfg_;
  std::string base_;
  std::string path_;
};

}  // namespace

std::unique_ptr<Backend> make_backend(const BackendConfig& config) {
  config.validate();
  switch (config.mode) {
    case BackendMode::SolverOracle: return std::make_unique<SolverOracleBackend>();
    case BackendMode::Scripted: return std::make_unique<ScriptedBackend>(config);
    case BackendMode::RemoteChat: return std::make_unique<RemoteChatBackend>(config);
  }
  throw BackendConfigError("backend: unknown mode");
}

std::string query_backend(const Prompt& prompt, const BackendConfig& config) {
  return make_backend(config)->query(prompt);
}

RecordingBackend::RecordingBackend(std::unique_ptr<Backend> inner, std::string path)
    : inner_(std::move(inner)), path_(std::move(path)) {}

std::string RecordingBackend::query(const Prompt& prompt) {
  std::string response = inner_->query(prompt);
  nlohmann::ordered_json record;
  record["prompt_sha256"] = sha256_hex(prompt.render());
  record["response_text"] = response;
  std::ofstream out(path_, std::ios::app);
  if (!out) throw IoError("cannot append to transcript " + path_);
  out << record.dump() << "\n";
  return response;
}

}  // namespace miohint::llm
