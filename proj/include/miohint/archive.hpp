#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "miohint/rest.hpp"
#include "miohint/target.hpp"

namespace miohint {

struct ScoredTestCase {
  TestCase test_case;
  double score = 0.0;
};

// Per-target populations plus the covered-target set and attempt/hit
// counters. Confined to the search thread; the covered set is append-only
// for the lifetime of a run.
class Archive {
 public:
  explicit Archive(std::size_t population_cap = 10) : population_cap_(population_cap) {}

  // Inserts into the target's population; when the cap is exceeded the
  // lowest-scoring member (first such, on ties) is evicted.
  void insert(const Target& t, const TestCase& tc, double score);

  // Marks a target covered and records `witness` in its population so every
  // covered target keeps at least one witnessing test case.
  void mark_covered(const Target& t, const TestCase& witness);

  bool is_covered(const Target& t) const { return covered_.count(t) != 0; }
  const std::set<Target>& covered() const { return covered_; }

  const std::vector<ScoredTestCase>* population(const Target& t) const;
  const std::map<Target, std::vector<ScoredTestCase>>& populations() const { return populations_; }

  void count_attempt(const Target& t, bool hit);
  std::int64_t attempts(const Target& t) const;
  std::int64_t hits(const Target& t) const;
  std::int64_t total_attempts() const;
  std::int64_t total_hits() const;

  std::size_t population_cap() const { return population_cap_; }

 private:
  std::map<Target, std::vector<ScoredTestCase>> populations_;
  std::set<Target> covered_;
  std::map<Target, std::int64_t> attempts_;
  std::map<Target, std::int64_t> hits_;
  std::size_t population_cap_;
};

}  // namespace miohint
