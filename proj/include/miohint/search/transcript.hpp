#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "miohint/rest.hpp"

namespace miohint {

// One line per mutation attempt. `provenance` records the attempt slot the
// budget assigned (LlmMutation for the first llm_times attempts of an
// iteration); `fallback` marks LLM slots that degraded to a random mutation
// after a backend/parse/apply failure.
struct AttemptRecord {
  std::int64_t iteration = 0;
  std::string target_id;
  Provenance provenance = Provenance::RandomMutation;
  bool fallback = false;
  std::optional<nlohmann::ordered_json> hint;
  bool covered_target = false;          // attempt covered its selected target
  std::int64_t new_coverage_count = 0;  // |covered targets| after this attempt
  std::int64_t elapsed_ms = 0;
  int llm_times = 0;
  int total_times = 0;

  nlohmann::ordered_json to_json() const;
  static AttemptRecord from_json(const nlohmann::json& j);
};

struct RunStart {
  std::string service;
  std::string mode;
  std::string backend;
  std::uint64_t seed = 0;
  std::string budget_kind;  // "iterations" | "seconds"
  std::int64_t budget_value = 0;
  int min_llm_queries = 0;
  std::int64_t population_cap = 0;
  int target_count = 0;
  int total_executable_lines = 0;

  nlohmann::ordered_json to_json() const;
  static RunStart from_json(const nlohmann::json& j);
};

struct RunEnd {
  std::int64_t iterations = 0;
  std::vector<std::string> covered_target_ids;
  int covered_line_count = 0;
  std::int64_t attempts_total = 0;
  std::int64_t hits_total = 0;
  std::int64_t wall_ms = 0;

  nlohmann::ordered_json to_json() const;
  static RunEnd from_json(const nlohmann::json& j);
};

// Line-delimited JSON writer; one record per line, flushed at end().
class TranscriptWriter {
 public:
  explicit TranscriptWriter(const std::string& path);
  void start(const RunStart& s);
  void attempt(const AttemptRecord& a);
  void end(const RunEnd& e);

 private:
  std::ofstream out_;
  std::string path_;
};

struct Transcript {
  RunStart start;
  std::vector<AttemptRecord> attempts;
  RunEnd end;

  // Throws MalformedTranscript on an empty file or a missing start/end record.
  static Transcript load_file(const std::string& path);
};

}  // namespace miohint
