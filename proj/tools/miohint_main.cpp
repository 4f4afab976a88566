#include <cctype>
#include <chrono>
#include <filesystem>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "miohint/harness/http.hpp"
#include "miohint/report/experiment.hpp"

namespace {

using namespace miohint;

// "<n>" -> n iterations; "<n>s|m|h" -> wall-clock seconds.
SearchBudget parse_budget(const std::string& s) {
  if (s.empty()) throw Error("empty budget");
  char suffix = s.back();
  SearchBudget b;
  if (std::isdigit(static_cast<unsigned char>(suffix))) {
    b.kind = SearchBudget::Kind::Iterations;
    b.value = std::stoll(s);
    return b;
  }
  std::int64_t n = std::stoll(s.substr(0, s.size() - 1));
  b.kind = SearchBudget::Kind::WallClockSeconds;
  switch (suffix) {
    case 's': b.value = n; break;
    case 'm': b.value = n * 60; break;
    case 'h': b.value = n * 3600; break;
    default: throw Error("budget suffix must be s, m or h");
  }
  return b;
}

int cmd_run(const std::string& service_dir, const std::string& mode_str,
            const std::string& budget_str, const std::string& backend_str, std::uint64_t seed,
            int reps, const std::string& out_dir, int min_llm, std::int64_t population_cap,
            const std::string& record_path) {
  ExperimentConfig cfg;
  cfg.service_dir = service_dir;
  auto mode = parse_search_mode(mode_str);
  if (!mode) {
    std::cerr << "unknown mode '" << mode_str << "' (baseline|miohint|miohint-no-ve)\n";
    return 2;
  }
  cfg.search.mode = *mode;
  cfg.search.budget = parse_budget(budget_str);
  cfg.search.seed = seed;
  cfg.search.min_llm_queries = min_llm;
  cfg.search.population_cap = population_cap;
  if (*mode != SearchMode::Baseline) cfg.backend = llm::BackendConfig::parse_cli(backend_str);
  cfg.repetitions = reps;
  cfg.out_dir = out_dir;
  cfg.record_path = record_path;

  Metrics metrics = run_experiment(cfg);
  std::cout << render_report({metrics}, ReportFormat::TableText);
  std::cout << "transcripts and reports written to " << out_dir << "\n";
  return 0;
}

int cmd_serve(const std::string& service_dir, const std::string& host, int port) {
  ServiceInstance service = ServiceInstance::load_dir(service_dir);
  HttpServer server(service, host, port);
  std::cout << "serving " << service.spec().name << " on " << server.base_url() << "\n";
  std::cout << "control endpoints: GET /__coverage, POST /__reset\n";
  std::cout << "press ctrl-c to stop\n";
  // listen thread runs until the process is killed
  for (;;) std::this_thread::sleep_for(std::chrono::seconds(3600));
  return 0;
}

int cmd_report(const std::vector<std::string>& transcripts, const std::string& manifest_path,
               const std::string& format_str, const std::string& out_path) {
  CorpusManifest manifest;
  if (!manifest_path.empty()) manifest = CorpusManifest::load_file(manifest_path);
  Metrics metrics = compute_metrics(transcripts, manifest);
  ReportFormat format = format_str == "csv" ? ReportFormat::Csv : ReportFormat::TableText;
  if (out_path.empty()) {
    std::cout << render_report({metrics}, format);
  } else {
    emit_report({metrics}, format, out_path);
    std::cout << "report written to " << out_path << "\n";
  }
  return 0;
}

int cmd_targets(const std::string& service_dir) {
  ServiceInstance service = ServiceInstance::load_dir(service_dir);
  for (const auto& t : service.targets()) std::cout << render_target_id(t) << "\n";
  std::cout << "# " << service.targets().size() << " targets, "
            << service.total_executable_lines() << " executable lines\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"whitebox REST API fuzzer with LLM-assisted mutations"};
  app.require_subcommand(1);

  std::string service_dir, mode = "miohint", budget = "2000", backend = "solver";
  std::string out_dir = "out", record_path, manifest_path, format = "table", out_path;
  std::string host = "127.0.0.1";
  std::uint64_t seed = 1;
  int reps = 1, port = 8080, min_llm = 2;
  std::int64_t population_cap = 10;
  std::vector<std::string> transcripts;

  auto* run = app.add_subcommand("run", "run a fuzzing experiment against a bundled service");
  run->add_option("--service", service_dir, "service directory (service.json + .msl sources)")
      ->required();
  run->add_option("--mode", mode, "baseline | miohint | miohint-no-ve");
  run->add_option("--budget", budget, "iterations (plain int) or wall-clock time (e.g. 30s, 1h)");
  run->add_option("--backend", backend, "solver | scripted:<file> | remote:<url>");
  run->add_option("--seed", seed, "base rng seed; repetition i runs with seed+i");
  run->add_option("--reps", reps, "number of repetitions");
  run->add_option("--out", out_dir, "output directory for transcripts and reports");
  run->add_option("--min-llm-queries", min_llm, "minimum LLM queries per iteration (M)");
  run->add_option("--population-cap", population_cap, "archive population cap per target");
  run->add_option("--record", record_path, "record backend responses for scripted replay");

  auto* serve = app.add_subcommand("serve", "serve a bundled service over HTTP");
  serve->add_option("--service", service_dir, "service directory")->required();
  serve->add_option("--host", host, "bind address");
  serve->add_option("--port", port, "port (0 picks a free one)");

  auto* report = app.add_subcommand("report", "recompute metrics from transcripts");
  report->add_option("--transcripts", transcripts, "transcript files (one per repetition)")
      ->required()
      ->expected(-1);
  report->add_option("--manifest", manifest_path, "corpus manifest for hard-target coverage");
  report->add_option("--format", format, "table | csv");
  report->add_option("--out", out_path, "output file (stdout when omitted)");

  auto* targets = app.add_subcommand("targets", "list a service's coverage targets");
  targets->add_option("--service", service_dir, "service directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed())
      return cmd_run(service_dir, mode, budget, backend, seed, reps, out_dir, min_llm,
                     population_cap, record_path);
    if (serve->parsed()) return cmd_serve(service_dir, host, port);
    if (report->parsed()) return cmd_report(transcripts, manifest_path, format, out_path);
    if (targets->parsed()) return cmd_targets(service_dir);
  } catch (const miohint::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
