#pragma once

#include "miohint/llm/backend.hpp"

namespace miohint::llm {

// Deterministic stand-in for a remote model. It reads the same prompt an LLM
// would receive, reconstructs the target's condition over request fields by
// interpreting the def-use chain and local code, and brute-forces a
// satisfying value from a generator family (regex-template instantiation
// over the chain's regex literals, boundary integers, literal strings,
// composed string shapes). When the context is insufficient — e.g. the
// value-expansion sections are empty and a guard constant lives elsewhere —
// it answers with a refusal rather than a fabricated hint.
class SolverOracleBackend : public Backend {
 public:
  std::string query(const Prompt& prompt) override;
};

}  // namespace miohint::llm
