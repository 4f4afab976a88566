#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "miohint/api_spec.hpp"
#include "miohint/coverage.hpp"
#include "miohint/msl/interp.hpp"
#include "miohint/msl/program.hpp"
#include "miohint/search/execution.hpp"

namespace miohint {

struct RequestOutcome {
  int status = 200;
  nlohmann::ordered_json body;
  CoverageSnapshot delta;  // coverage newly recorded by this request
};

// A loaded, instrumented service: parsed program, endpoint dispatch table,
// and coverage counters. Single-threaded per instance.
class ServiceInstance {
 public:
  // Loads <dir>/service.json plus the .msl sources it references.
  static ServiceInstance load_dir(const std::string& dir);
  // Loads from an in-memory spec and unit-name -> source-text map.
  static ServiceInstance load(ServiceSpec spec, const std::map<std::string, std::string>& sources);

  const ServiceSpec& spec() const { return spec_; }
  const msl::MslProgram& program() const { return program_; }
  const std::vector<Target>& targets() const { return targets_; }
  int total_executable_lines() const { return total_lines_; }

  // Routes and executes one action. All failures map to statuses: 404 for
  // an unroutable (verb, path), 400 for a missing or uncoercible required
  // field, 500 for an interpreter runtime error.
  RequestOutcome handle_request(const RestCallAction& action);

  // Wire-level entry shared by the in-process and HTTP paths, so both modes
  // are observationally equivalent by construction.
  RequestOutcome handle_wire(HttpVerb verb, const std::string& concrete_path,
                             const std::map<std::string, std::string>& query,
                             const std::vector<std::pair<std::string, std::string>>& headers,
                             const nlohmann::json& body);

  void reset_coverage();
  CoverageSnapshot snapshot() const { return coverage_.snapshot(); }
  const std::map<Target, double>& scores() const { return coverage_.scores; }

  nlohmann::ordered_json coverage_json() const;

 private:
  ServiceInstance() = default;
  void validate_and_index();

  ServiceSpec spec_;
  msl::MslProgram program_;
  std::vector<Target> targets_;
  int total_lines_ = 0;
  msl::CoverageState coverage_;
};

// In-process execution of whole test cases with per-evaluation reset.
class InProcessEvaluator : public Evaluator {
 public:
  explicit InProcessEvaluator(ServiceInstance& service) : service_(service) {}
  ExecutionResult evaluate(const TestCase& tc) override;

 private:
  ServiceInstance& service_;
};

// Corpus manifest: designated hard targets with known witness requests.
struct ManifestEntry {
  Target target;
  RestCallAction witness;
};

struct CorpusManifest {
  std::string service;
  bool requires_chain = false;
  std::vector<ManifestEntry> hard_targets;

  static CorpusManifest load_file(const std::string& path);
  std::vector<std::string> hard_target_ids() const;
};

}  // namespace miohint
