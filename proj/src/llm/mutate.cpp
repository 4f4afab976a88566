#include "miohint/llm/mutate.hpp"

namespace miohint::llm {

namespace {

LlmMutationOutcome fallback(const TestCase& tc, const std::vector<EndpointSpec>& apis,
                            const MutationConfig& mcfg, Rng& rng, std::string detail) {
  LlmMutationOutcome out;
  out.test_case = random_mutate(tc, apis, mcfg, rng);
  out.fallback = true;
  out.detail = std::move(detail);
  return out;
}

void record_failure(FeedbackLedger& ledger, const Target& target, Outcome outcome,
                    const std::string& detail, const MutationHint* hint = nullptr) {
  FeedbackEntry e;
  e.outcome = outcome;
  e.detail = detail;
  if (hint) {
    e.hint = *hint;
    e.has_hint = true;
  } else {
    e.has_hint = false;
  }
  ledger.record(target, e);
}

}  // namespace

LlmMutationOutcome llm_mutate(const TestCase& tc, const std::vector<EndpointSpec>& apis,
                              const RelatedCode& related, Backend& backend,
                              FeedbackLedger& ledger, const Target& target,
                              const MutationConfig& mcfg, Rng& rng) {
  Prompt prompt = build_prompt(target, related, tc, ledger.slice(target));

  std::string response;
  try {
    response = backend.query(prompt);
  } catch (const BackendError& e) {
    record_failure(ledger, target, Outcome::ApplyError, std::string("backend: ") + e.what());
    return fallback(tc, apis, mcfg, rng, e.what());
  }

  MutationHint hint;
  try {
    hint = parse_hint(response);
  } catch (const HintParseError& e) {
    record_failure(ledger, target, Outcome::ParseError, e.what());
    return fallback(tc, apis, mcfg, rng, e.what());
  }

  try {
    LlmMutationOutcome out;
    out.test_case = apply_hint(tc, hint);
    out.hint = hint;
    return out;
  } catch (const NoSuchField& e) {
    std::string detail = e.what();
    if (!e.available_fields.empty()) {
      detail += " (available:";
      for (const auto& f : e.available_fields) detail += " " + f;
      detail += ")";
    }
    record_failure(ledger, target, Outcome::ApplyError, detail, &hint);
    return fallback(tc, apis, mcfg, rng, detail);
  } catch (const Error& e) {
    record_failure(ledger, target, Outcome::ApplyError, e.what(), &hint);
    return fallback(tc, apis, mcfg, rng, e.what());
  }
}

LlmMutationOutcome llm_mutate(const TestCase& tc, const std::vector<EndpointSpec>& apis,
                              const RelatedCode& related, const BackendConfig& config,
                              FeedbackLedger& ledger, const Target& target,
                              const MutationConfig& mcfg, Rng& rng) {
  auto backend = make_backend(config);
  return llm_mutate(tc, apis, related, *backend, ledger, target, mcfg, rng);
}

}  // namespace miohint::llm
