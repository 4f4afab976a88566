#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "miohint/coverage.hpp"
#include "miohint/rest.hpp"
#include "miohint/target.hpp"

namespace miohint {

// Result of executing one test case against the SUT with coverage reset
// beforehand. Scores are per-target heuristics in [0,1]; a score of 1 means
// the target was covered by this execution.
struct ExecutionResult {
  std::vector<int> statuses;  // one HTTP status per action
  CoverageSnapshot snapshot;
  std::map<Target, double> scores;
  std::int64_t wall_ms = 0;
};

class Evaluator {
 public:
  virtual ~Evaluator() = default;
  virtual ExecutionResult evaluate(const TestCase& tc) = 0;
};

}  // namespace miohint
