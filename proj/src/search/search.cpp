#include "miohint/search/search.hpp"

#include <algorithm>
#include <chrono>
#include <map>

#include "miohint/llm/mutate.hpp"

namespace miohint {

const char* to_string(SearchMode m) {
  switch (m) {
    case SearchMode::Baseline: return "baseline";
    case SearchMode::MioHint: return "miohint";
    case SearchMode::MioHintNoVE: return "miohint-no-ve";
  }
  return "?";
}

std::optional<SearchMode> parse_search_mode(const std::string& s) {
  if (s == "baseline") return SearchMode::Baseline;
  if (s == "miohint") return SearchMode::MioHint;
  if (s == "miohint-no-ve") return SearchMode::MioHintNoVE;
  return std::nullopt;
}

void SearchConfig::validate() const {
  if (min_llm_queries < 1) throw Error("search config: M must be >= 1");
  if (budget.value <= 0) throw Error("search config: budget must be positive");
  if (population_cap < 1) throw Error("search config: population cap must be >= 1");
  mutation.validate();
}

MutationBudget mutation_budget(int up_to_n_times, bool has_related_code, int min_llm_queries) {
  MutationBudget b;
  b.llm_times = has_related_code ? std::max(up_to_n_times / 2, min_llm_queries) : 0;
  b.total_times = std::max(up_to_n_times, b.llm_times);
  return b;
}

Target choose_target(const Archive& archive, Rng& rng) {
  std::vector<Target> eligible;
  for (const auto& [target, population] : archive.populations()) {
    if (!archive.is_covered(target) && !population.empty()) eligible.push_back(target);
  }
  if (eligible.empty())
    throw NoEligibleTarget("no uncovered target with a non-empty population");
  return eligible[rand_below(rng, eligible.size())];
}

TestCase choose_test_case(const Archive& archive, const Target& target, Rng& rng) {
  const auto* population = archive.population(target);
  if (!population || population->empty())
    throw EmptyPopulation("no population for target " + render_target_id(target));
  double best = -1.0;
  for (const auto& member : *population) best = std::max(best, member.score);
  std::vector<const ScoredTestCase*> top;
  for (const auto& member : *population)
    if (member.score == best) top.push_back(&member);
  return top[rand_below(rng, top.size())]->test_case;
}

void update_archive(Archive& archive, const TestCase& tc, const ExecutionResult& before,
                    const ExecutionResult& after, CoverageComparison cmp) {
  if (!coverage_not_fewer(after.snapshot, before.snapshot, cmp)) return;
  for (const auto& [target, score] : after.scores)
    if (score > 0.0) archive.insert(target, tc, score);
  for (const auto& covered : after.snapshot.covered_targets) archive.mark_covered(covered, tc);
}

namespace {

struct Clock {
  std::chrono::steady_clock::time_point begin = std::chrono::steady_clock::now();
  std::int64_t elapsed_ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                                 begin)
        .count();
  }
};

}  // namespace

RunResult run_search(ServiceInstance& service, const SearchConfig& config, Evaluator& evaluator,
                     llm::Backend* backend, TranscriptWriter* transcript) {
  config.validate();
  if (config.mode != SearchMode::Baseline && backend == nullptr)
    throw BackendConfigError("search: LLM-assisted modes need a backend");

  const auto& apis = service.spec().endpoints;
  Rng rng(config.seed);
  RunResult result;
  result.archive = Archive(static_cast<std::size_t>(config.population_cap));
  Archive& archive = result.archive;
  llm::FeedbackLedger ledger;
  Clock run_clock;

  const std::size_t total_targets = service.targets().size();
  const bool det = config.deterministic_timing &&
                   config.budget.kind == SearchBudget::Kind::Iterations;

  if (transcript) {
    RunStart s;
    s.service = service.spec().name;
    s.mode = to_string(config.mode);
    s.backend = config.mode == SearchMode::Baseline ? "none" : "attached";
    s.seed = config.seed;
    s.budget_kind =
        config.budget.kind == SearchBudget::Kind::Iterations ? "iterations" : "seconds";
    s.budget_value = config.budget.value;
    s.min_llm_queries = config.min_llm_queries;
    s.population_cap = config.population_cap;
    s.target_count = static_cast<int>(total_targets);
    s.total_executable_lines = service.total_executable_lines();
    transcript->start(s);
  }

  // Line coverage is reported over the whole run, so the per-evaluation
  // snapshots are unioned here.
  std::set<LineKey> covered_lines;

  // Target coverage is execution-observed: any evaluation that reaches a
  // target marks it covered (with the executed test case as witness). The
  // CoverNotFewer gate only governs population admission and promotion.
  auto evaluate_safely = [&](const TestCase& tc) -> ExecutionResult {
    try {
      ExecutionResult res = evaluator.evaluate(tc);
      covered_lines.insert(res.snapshot.covered_lines.begin(), res.snapshot.covered_lines.end());
      for (const auto& t : res.snapshot.covered_targets) archive.mark_covered(t, tc);
      return res;
    } catch (const Error&) {
      // Harness failure: treated as zero coverage.
      return ExecutionResult{};
    }
  };

  // Alg. 1 seeding: random test cases, evaluated against an empty baseline.
  for (int i = 0; i < config.initial_random_tests; ++i) {
    TestCase tc = sample_random_test_case(apis, config.mutation, rng);
    ExecutionResult res = evaluate_safely(tc);
    update_archive(archive, tc, ExecutionResult{}, res, config.comparison);
  }

  std::map<Target, int> failure_streak;
  std::map<Target, std::optional<RelatedCode>> related_cache;

  auto budget_remains = [&]() {
    if (config.budget.kind == SearchBudget::Kind::Iterations)
      return result.iterations < config.budget.value;
    return run_clock.elapsed_ms() < config.budget.value * 1000;
  };

  while (budget_remains()) {
    if (archive.covered().size() == total_targets && total_targets > 0) break;

    Target target;
    try {
      target = choose_target(archive, rng);
    } catch (const NoEligibleTarget&) {
      // Nothing selectable yet: seed another random test case.
      TestCase tc = sample_random_test_case(apis, config.mutation, rng);
      ExecutionResult res = evaluate_safely(tc);
      update_archive(archive, tc, ExecutionResult{}, res, config.comparison);
      ++result.iterations;
      continue;
    }
    TestCase current = choose_test_case(archive, target, rng);

    // Related code is extracted only for branch / method-replacement
    // targets; every enumerated target here is one of those.
    std::optional<RelatedCode> related;
    if (config.mode != SearchMode::Baseline) {
      auto cached = related_cache.find(target);
      if (cached == related_cache.end()) {
        std::optional<RelatedCode> fresh;
        try {
          fresh = extract_related_code(service.program(), target, config.extraction);
          if (config.mode == SearchMode::MioHintNoVE) {
            fresh->def_use_chain = DefUseChain{};
            fresh->called_function_defs.clear();
          }
        } catch (const Error&) {
          fresh = std::nullopt;
        }
        cached = related_cache.emplace(target, std::move(fresh)).first;
      }
      related = cached->second;
    }

    int streak = 0;
    if (auto it = failure_streak.find(target); it != failure_streak.end()) streak = it->second;
    int up_to_n = std::min(1 << std::min(streak, 10), config.mutation_schedule_cap);
    MutationBudget budget = mutation_budget(up_to_n, related.has_value(), config.min_llm_queries);

    ExecutionResult before = evaluate_safely(current);

    for (int i = 1; i <= budget.total_times; ++i) {
      Clock attempt_clock;
      AttemptRecord record;
      record.iteration = result.iterations;
      record.target_id = render_target_id(target);
      record.llm_times = budget.llm_times;
      record.total_times = budget.total_times;

      TestCase mutant;
      std::optional<MutationHint> hint;
      if (i <= budget.llm_times) {
        llm::LlmMutationOutcome out = llm::llm_mutate(current, apis, *related, *backend, ledger,
                                                      target, config.mutation, rng);
        mutant = std::move(out.test_case);
        hint = out.hint;
        record.provenance = Provenance::LlmMutation;
        record.fallback = out.fallback;
        if (hint) record.hint = hint->to_json();
      } else {
        mutant = random_mutate(current, apis, config.mutation, rng);
        record.provenance = Provenance::RandomMutation;
      }

      ExecutionResult after = evaluate_safely(mutant);
      bool covered_target = after.snapshot.covered_targets.count(target) != 0;
      archive.count_attempt(target, covered_target);
      if (hint)
        llm::record_feedback(ledger, target, *hint,
                             covered_target ? llm::Outcome::TargetCovered
                                            : llm::Outcome::NotCovered);

      if (coverage_not_fewer(after.snapshot, before.snapshot, config.comparison)) {
        update_archive(archive, mutant, before, after, config.comparison);
        current = mutant;
        before = after;
      }

      record.covered_target = covered_target;
      record.new_coverage_count = static_cast<std::int64_t>(archive.covered().size());
      record.elapsed_ms = det ? 0 : attempt_clock.elapsed_ms();
      if (transcript) transcript->attempt(record);
    }

    if (archive.is_covered(target)) failure_streak.erase(target);
    else failure_streak[target] += 1;
    ++result.iterations;
  }

  if (transcript) {
    RunEnd e;
    e.iterations = result.iterations;
    for (const auto& t : archive.covered()) e.covered_target_ids.push_back(render_target_id(t));
    e.covered_line_count = static_cast<int>(covered_lines.size());
    e.attempts_total = archive.total_attempts();
    e.hits_total = archive.total_hits();
    e.wall_ms = det ? 0 : run_clock.elapsed_ms();
    transcript->end(e);
  }
  return result;
}

}  // namespace miohint
