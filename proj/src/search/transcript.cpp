#include "miohint/search/transcript.hpp"

#include "miohint/errors.hpp"

namespace miohint {

nlohmann::ordered_json AttemptRecord::to_json() const {
  nlohmann::ordered_json j;
  j["type"] = "attempt";
  j["iteration"] = iteration;
  j["target_id"] = target_id;
  j["provenance"] = to_string(provenance);
  j["fallback"] = fallback;
  j["hint"] = hint ? *hint : nlohmann::ordered_json(nullptr);
  j["covered_target"] = covered_target;
  j["new_coverage_count"] = new_coverage_count;
  j["elapsed_ms"] = elapsed_ms;
  j["llm_times"] = llm_times;
  j["total_times"] = total_times;
  return j;
}

AttemptRecord AttemptRecord::from_json(const nlohmann::json& j) {
  AttemptRecord a;
  a.iteration = j.at("iteration").get<std::int64_t>();
  a.target_id = j.at("target_id").get<std::string>();
  const std::string prov = j.at("provenance").get<std::string>();
  if (prov == "LlmMutation") a.provenance = Provenance::LlmMutation;
  else if (prov == "RandomInit") a.provenance = Provenance::RandomInit;
  else a.provenance = Provenance::RandomMutation;
  a.fallback = j.value("fallback", false);
  if (j.contains("hint") && !j["hint"].is_null()) a.hint = j["hint"];
  a.covered_target = j.at("covered_target").get<bool>();
  a.new_coverage_count = j.at("new_coverage_count").get<std::int64_t>();
  a.elapsed_ms = j.at("elapsed_ms").get<std::int64_t>();
  a.llm_times = j.value("llm_times", 0);
  a.total_times = j.value("total_times", 0);
  return a;
}

nlohmann::ordered_json RunStart::to_json() const {
  nlohmann::ordered_json j;
  j["type"] = "run_start";
  j["schema_version"] = 1;
  j["service"] = service;
  j["mode"] = mode;
  j["backend"] = backend;
  j["seed"] = seed;
  j["budget_kind"] = budget_kind;
  j["budget_value"] = budget_value;
  j["min_llm_queries"] = min_llm_queries;
  j["population_cap"] = population_cap;
  j["target_count"] = target_count;
  j["total_executable_lines"] = total_executable_lines;
  return j;
}

RunStart RunStart::from_json(const nlohmann::json& j) {
  RunStart s;
  s.service = j.at("service").get<std::string>();
  s.mode = j.at("mode").get<std::string>();
  s.backend = j.value("backend", "");
  s.seed = j.at("seed").get<std::uint64_t>();
  s.budget_kind = j.at("budget_kind").get<std::string>();
  s.budget_value = j.at("budget_value").get<std::int64_t>();
  s.min_llm_queries = j.value("min_llm_queries", 0);
  s.population_cap = j.value("population_cap", 0);
  s.target_count = j.at("target_count").get<int>();
  s.total_executable_lines = j.at("total_executable_lines").get<int>();
  return s;
}

nlohmann::ordered_json RunEnd::to_json() const {
  nlohmann::ordered_json j;
  j["type"] = "run_end";
  j["iterations"] = iterations;
  j["covered_target_count"] = covered_target_ids.size();
  j["covered_target_ids"] = covered_target_ids;
  j["covered_line_count"] = covered_line_count;
  j["attempts_total"] = attempts_total;
  j["hits_total"] = hits_total;
  j["wall_ms"] = wall_ms;
  return j;
}

RunEnd RunEnd::from_json(const nlohmann::json& j) {
  RunEnd e;
  e.iterations = j.at("iterations").get<std::int64_t>();
  for (const auto& id : j.at("covered_target_ids")) e.covered_target_ids.push_back(id.get<std::string>());
  e.covered_line_count = j.at("covered_line_count").get<int>();
  e.attempts_total = j.at("attempts_total").get<std::int64_t>();
  e.hits_total = j.at("hits_total").get<std::int64_t>();
  e.wall_ms = j.value("wall_ms", std::int64_t{0});
  return e;
}

TranscriptWriter::TranscriptWriter(const std::string& path) : out_(path), path_(path) {
  if (!out_) throw IoError("cannot write transcript " + path);
}

void TranscriptWriter::start(const RunStart& s) { out_ << s.to_json().dump() << "\n"; }
void TranscriptWriter::attempt(const AttemptRecord& a) { out_ << a.to_json().dump() << "\n"; }

void TranscriptWriter::end(const RunEnd& e) {
  out_ << e.to_json().dump() << "\n";
  out_.flush();
  if (!out_) throw IoError("failed writing transcript " + path_);
}

Transcript Transcript::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MalformedTranscript("cannot read transcript " + path);
  Transcript t;
  bool have_start = false, have_end = false;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("type"))
      throw MalformedTranscript("bad record in " + path + ": " + line.substr(0, 80));
    const std::string type = j["type"].get<std::string>();
    try {
      if (type == "run_start") {
        t.start = RunStart::from_json(j);
        have_start = true;
      } else if (type == "attempt") {
        t.attempts.push_back(AttemptRecord::from_json(j));
      } else if (type == "run_end") {
        t.end = RunEnd::from_json(j);
        have_end = true;
      } else {
        throw MalformedTranscript("unknown record type '" + type + "' in " + path);
      }
    } catch (const nlohmann::json::exception& e) {
      throw MalformedTranscript("bad record in " + path + ": " + e.what());
    }
  }
  if (!have_start || !have_end)
    throw MalformedTranscript("transcript " + path + " is missing run_start/run_end records");
  return t;
}

}  // namespace miohint
