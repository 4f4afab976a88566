#include "miohint/archive.hpp"

#include <algorithm>

namespace miohint {

void Archive::insert(const Target& t, const TestCase& tc, double score) {
  auto& pop = populations_[t];
  pop.push_back(ScoredTestCase{tc, score});
  if (pop.size() > population_cap_) {
    auto lowest = std::min_element(pop.begin(), pop.end(),
                                   [](const ScoredTestCase& a, const ScoredTestCase& b) {
                                     return a.score < b.score;
                                   });
    pop.erase(lowest);
  }
}

void Archive::mark_covered(const Target& t, const TestCase& witness) {
  if (!covered_.count(t)) {
    covered_.insert(t);
    insert(t, witness, 1.0);
  }
}

const std::vector<ScoredTestCase>* Archive::population(const Target& t) const {
  auto it = populations_.find(t);
  return it == populations_.end() ? nullptr : &it->second;
}

void Archive::count_attempt(const Target& t, bool hit) {
  attempts_[t] += 1;
  if (hit) hits_[t] += 1;
}

std::int64_t Archive::attempts(const Target& t) const {
  auto it = attempts_.find(t);
  return it == attempts_.end() ? 0 : it->second;
}

std::int64_t Archive::hits(const Target& t) const {
  auto it = hits_.find(t);
  return it == hits_.end() ? 0 : it->second;
}

std::int64_t Archive::total_attempts() const {
  std::int64_t n = 0;
  for (const auto& [_, c] : attempts_) n += c;
  return n;
}

std::int64_t Archive::total_hits() const {
  std::int64_t n = 0;
  for (const auto& [_, c] : hits_) n += c;
  return n;
}

}  // namespace miohint
