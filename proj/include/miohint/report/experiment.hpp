#pragma once

#include <string>

#include "miohint/llm/backend.hpp"
#include "miohint/report/metrics.hpp"
#include "miohint/search/search.hpp"

namespace miohint {

struct ExperimentConfig {
  std::string service_dir;
  SearchConfig search;           // search.mode selects baseline/miohint/miohint-no-ve
  llm::BackendConfig backend;    // ignored in baseline mode
  int repetitions = 1;
  std::string out_dir;
  std::string record_path;       // when set, every backend response is recorded here

  void validate() const;
};

// Runs `repetitions` searches with seeds seed+0..seed+n-1, writing one
// transcript per repetition plus table and csv reports under out_dir.
// Returns the aggregate metrics.
Metrics run_experiment(const ExperimentConfig& config);

// Transcript file path for one repetition.
std::string transcript_path(const ExperimentConfig& config, int rep);

}  // namespace miohint
