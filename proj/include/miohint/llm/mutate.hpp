#pragma once

#include <optional>
#include <string>

#include "miohint/llm/backend.hpp"
#include "miohint/llm/ledger.hpp"
#include "miohint/mutation.hpp"

namespace miohint::llm {

struct LlmMutationOutcome {
  TestCase test_case;
  std::optional<MutationHint> hint;  // set when a hint was parsed and applied
  bool fallback = false;             // degraded to a plain random mutation
  std::string detail;                // failure detail when fallback is true
};

// One LLM-assisted mutation attempt: build the prompt, query the backend,
// parse and apply the hint. Parse/apply/backend failures are recorded in the
// ledger and degrade to a random mutation so the search never stalls; the
// covered/uncovered outcome of an applied hint is recorded by the caller
// after evaluation.
LlmMutationOutcome llm_mutate(const TestCase& tc, const std::vector<EndpointSpec>& apis,
                              const RelatedCode& related, Backend& backend,
                              FeedbackLedger& ledger, const Target& target,
                              const MutationConfig& mutation_config, Rng& rng);

// Facade constructing a one-shot backend from the config.
LlmMutationOutcome llm_mutate(const TestCase& tc, const std::vector<EndpointSpec>& apis,
                              const RelatedCode& related, const BackendConfig& config,
                              FeedbackLedger& ledger, const Target& target,
                              const MutationConfig& mutation_config, Rng& rng);

}  // namespace miohint::llm
