#pragma once

#include <string>
#include <vector>

#include "miohint/extraction.hpp"
#include "miohint/llm/ledger.hpp"
#include "miohint/rest.hpp"

namespace miohint::llm {

// The six prompt sections, kept separate so tests can check structure and
// ordering. render() joins them in order 1-6.
struct Prompt {
  std::string task;            // (1) task instruction
  std::string reasoning;       // (2) chain-of-thought decomposition
  std::string control_flow;    // (3) control-flow / implicit-flow note
  std::string context;         // (4) Target/LineCode/DefUseChain/CalledFunctionDefinition/FunctionCode/RestCallActions
  std::string output_format;   // (5) JSON output contract with examples
  std::string feedback;        // (6) prior hints and their outcomes

  std::string render() const;
};

// Section headers, in prompt order. Exposed for structural assertions.
extern const char* const kSectionHeaders[6];

// Deterministic prompt construction from the extracted context, the test
// case under mutation, and the (most-recent-first, capped) feedback slice.
Prompt build_prompt(const Target& target, const RelatedCode& related, const TestCase& tc,
                    const std::vector<FeedbackEntry>& feedback_slice);

}  // namespace miohint::llm
