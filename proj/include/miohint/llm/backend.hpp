#pragma once

#include <memory>
#include <string>

#include "miohint/errors.hpp"
#include "miohint/llm/prompt.hpp"

namespace miohint::llm {

enum class BackendMode { RemoteChat, SolverOracle, Scripted };

struct BackendConfig {
  BackendMode mode = BackendMode::SolverOracle;

  // RemoteChat
  std::string endpoint_url;  // full chat-completions URL
  std::string model = "gpt-4o";
  double temperature = 0.0;
  int timeout_ms = 30000;
  int max_retries = 2;
  std::string api_key_env = "MIOHINT_API_KEY";

  // Scripted
  std::string script_path;

  void validate() const;

  // CLI forms: "solver" | "scripted:<file>" | "remote:<url>".
  static BackendConfig parse_cli(const std::string& arg);
  std::string describe() const;
};

class Backend {
 public:
  virtual ~Backend() = default;
  // Returns the model response text; throws BackendError after the retry
  // budget is exhausted.
  virtual std::string query(const Prompt& prompt) = 0;
};

std::unique_ptr<Backend> make_backend(const BackendConfig& config);

// One-shot facade over make_backend.
std::string query_backend(const Prompt& prompt, const BackendConfig& config);

// Decorator that appends {prompt_sha256, response_text} records to a file,
// producing a transcript replayable by the scripted backend.
class RecordingBackend : public Backend {
 public:
  RecordingBackend(std::unique_ptr<Backend> inner, std::string path);
  std::string query(const Prompt& prompt) override;

 private:
  std::unique_ptr<Backend> inner_;
  std::string path_;
};

}  // namespace miohint::llm
