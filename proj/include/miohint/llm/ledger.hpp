#pragma once

#include <map>
#include <string>
#include <vector>

#include "miohint/hint.hpp"
#include "miohint/target.hpp"

namespace miohint::llm {

enum class Outcome { TargetCovered, NotCovered, ApplyError, ParseError };

const char* to_string(Outcome o);

struct FeedbackEntry {
  MutationHint hint;      // meaningful unless the outcome is ParseError
  Outcome outcome = Outcome::NotCovered;
  std::string detail;     // error text for ApplyError/ParseError
  bool has_hint = true;
};

// Per-target history of hints and their execution outcomes; append-only
// within a run. The slice handed to prompt construction is most-recent-first
// and capped.
class FeedbackLedger {
 public:
  static constexpr std::size_t kSliceCap = 5;

  void record(const Target& t, const FeedbackEntry& entry) { entries_[t].push_back(entry); }

  const std::vector<FeedbackEntry>& history(const Target& t) const {
    static const std::vector<FeedbackEntry> empty;
    auto it = entries_.find(t);
    return it == entries_.end() ? empty : it->second;
  }

  std::vector<FeedbackEntry> slice(const Target& t) const {
    const auto& all = history(t);
    std::vector<FeedbackEntry> out;
    for (auto it = all.rbegin(); it != all.rend() && out.size() < kSliceCap; ++it)
      out.push_back(*it);
    return out;
  }

 private:
  std::map<Target, std::vector<FeedbackEntry>> entries_;
};

void record_feedback(FeedbackLedger& ledger, const Target& t, const MutationHint& hint,
                     Outcome outcome, const std::string& detail = "");

}  // namespace miohint::llm
