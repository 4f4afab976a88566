#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "miohint/archive.hpp"
#include "miohint/extraction.hpp"
#include "miohint/harness/service.hpp"
#include "miohint/llm/backend.hpp"
#include "miohint/mutation.hpp"
#include "miohint/search/execution.hpp"
#include "miohint/search/transcript.hpp"
#include "miohint/util/rng.hpp"

namespace miohint {

enum class SearchMode { Baseline, MioHint, MioHintNoVE };

const char* to_string(SearchMode m);
std::optional<SearchMode> parse_search_mode(const std::string& s);

struct SearchBudget {
  enum class Kind { Iterations, WallClockSeconds };
  Kind kind = Kind::Iterations;
  std::int64_t value = 2000;
};

struct SearchConfig {
  SearchBudget budget;
  int min_llm_queries = 2;  // M
  std::int64_t population_cap = 10;
  int initial_random_tests = 10;
  int mutation_schedule_cap = 16;
  std::uint64_t seed = 1;
  SearchMode mode = SearchMode::MioHint;
  CoverageComparison comparison = CoverageComparison::Cardinality;
  MutationConfig mutation;
  DefUseOptions extraction;
  // Iteration budgets run with a zeroed virtual clock so transcripts are
  // byte-reproducible; wall-clock budgets record real times.
  bool deterministic_timing = true;

  void validate() const;
};

struct MutationBudget {
  int llm_times = 0;
  int total_times = 0;
};

// Alg. 1 budget split: llm = 0 without related code, otherwise
// max(floor(n/2), M); total = max(n, llm).
MutationBudget mutation_budget(int up_to_n_times, bool has_related_code, int min_llm_queries);

// Uniformly random uncovered target among those with a non-empty population.
// Throws NoEligibleTarget when everything is covered or nothing is seeded.
Target choose_target(const Archive& archive, Rng& rng);

// Highest-scoring member of the target's population; ties broken uniformly.
TestCase choose_test_case(const Archive& archive, const Target& target, Rng& rng);

// When the new result covers not fewer targets than the old one, inserts the
// test case into the population of every target it scores > 0 on and marks
// newly covered targets; otherwise leaves the archive untouched.
void update_archive(Archive& archive, const TestCase& tc, const ExecutionResult& before,
                    const ExecutionResult& after,
                    CoverageComparison cmp = CoverageComparison::Cardinality);

struct RunResult {
  Archive archive{10};
  std::int64_t iterations = 0;
};

// The full search loop: seed random test cases, then per iteration choose a
// target and test case, extract related code (unless Baseline), split the
// mutation budget, run LLM-assisted then random mutations, evaluate, and
// update the archive. Every mutation attempt lands in the transcript.
RunResult run_search(ServiceInstance& service, const SearchConfig& config, Evaluator& evaluator,
                     llm::Backend* backend, TranscriptWriter* transcript);

}  // namespace miohint
