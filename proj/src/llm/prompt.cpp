#include "miohint/llm/prompt.hpp"

namespace miohint::llm {

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::TargetCovered: return "TargetCovered";
    case Outcome::NotCovered: return "NotCovered";
    case Outcome::ApplyError: return "ApplyError";
    case Outcome::ParseError: return "ParseError";
  }
  return "?";
}

void record_feedback(FeedbackLedger& ledger, const Target& t, const MutationHint& hint,
                     Outcome outcome, const std::string& detail) {
  FeedbackEntry e;
  e.hint = hint;
  e.outcome = outcome;
  e.detail = detail;
  e.has_hint = outcome != Outcome::ParseError;
  ledger.record(t, e);
}

const char* const kSectionHeaders[6] = {
    "## 1. Task",          "## 2. Reasoning steps", "## 3. Control flow",
    "## 4. Context",       "## 5. Output format",   "## 6. Feedback",
};

std::string Prompt::render() const {
  std::string out;
  const std::string* sections[6] = {&task, &reasoning, &control_flow, &context, &output_format, &feedback};
  for (int i = 0; i < 6; ++i) {
    out += kSectionHeaders[i];
    out += "\n";
    out += *sections[i];
    if (!sections[i]->empty() && sections[i]->back() != '\n') out += "\n";
    out += "\n";
  }
  return out;
}

Prompt build_prompt(const Target& target, const RelatedCode& related, const TestCase& tc,
                    const std::vector<FeedbackEntry>& feedback_slice) {
  Prompt p;

  p.task =
      "You are helping a coverage-guided REST API fuzzer. The search is stuck on the "
      "coverage target below. Propose a mutation of ONE field of ONE request in the test "
      "case so that executing the mutated test case reaches the target with its expected "
      "outcome.";

  p.reasoning =
      "Work step by step:\n"
      "1. Select the REST call action most relevant to the target.\n"
      "2. Within that action, locate the parameter type (path, query, header or body) and "
      "the exact field whose value flows into the target condition.\n"
      "3. Decide the new value for that field so the target's expected outcome holds.";

  p.control_flow =
      "Pay close attention to the control-flow conditions that guard the target line, "
      "including implicit flows: every enclosing condition must also be satisfied by the "
      "same request for execution to reach the target.";

  // The extracted bundle already renders the Target/LineCode/DefUseChain/
  // CalledFunctionDefinition/FunctionCode placeholders; the serialized
  // actions complete the template.
  p.context = related.to_text();
  p.context += "RestCallActions:\n";
  for (std::size_t i = 0; i < tc.actions.size(); ++i)
    p.context += tc.actions[i].to_json(static_cast<int>(i)).dump() + "\n";

  p.output_format =
      "Respond with exactly one JSON object of the form\n"
      "{\"action\": <action index>, \"parameterType\": \"path|query|header|body\", "
      "\"field\": \"<field name>\", \"newValue\": <value>}\n"
      "Examples:\n"
      "{\"action\": 0, \"parameterType\": \"body\", \"field\": \"hgvsc\", \"newValue\": \"c.0A>G\"}\n"
      "{\"action\": 1, \"parameterType\": \"query\", \"field\": \"amount\", \"newValue\": 10000}";

  if (feedback_slice.empty()) {
    p.feedback = "No previous attempts for this target.";
  } else {
    p.feedback = "Previous attempts for this target, most recent first. Do not repeat a "
                 "failed mutation:\n";
    for (const auto& e : feedback_slice) {
      p.feedback += "- ";
      p.feedback += e.has_hint ? e.hint.to_json().dump() : std::string("<unparseable response>");
      p.feedback += " -> ";
      p.feedback += to_string(e.outcome);
      if (!e.detail.empty()) p.feedback += " (" + e.detail + ")";
      p.feedback += "\n";
    }
  }

  (void)target;  // identity already rendered inside the context bundle
  return p;
}

}  // namespace miohint::llm
