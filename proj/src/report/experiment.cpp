#include "miohint/report/experiment.hpp"

#include <filesystem>

namespace miohint {

void ExperimentConfig::validate() const {
  if (repetitions < 1) throw Error("experiment: repetitions must be >= 1");
  if (service_dir.empty()) throw Error("experiment: service dir required");
  if (out_dir.empty()) throw Error("experiment: output dir required");
  search.validate();
}

std::string transcript_path(const ExperimentConfig& config, int rep) {
  return config.out_dir + "/" + to_string(config.search.mode) + "_rep" + std::to_string(rep) +
         ".jsonl";
}

Metrics run_experiment(const ExperimentConfig& config) {
  config.validate();
  std::filesystem::create_directories(config.out_dir);

  std::unique_ptr<llm::Backend> backend;
  if (config.search.mode != SearchMode::Baseline) {
    backend = llm::make_backend(config.backend);
    if (!config.record_path.empty())
      backend = std::make_unique<llm::RecordingBackend>(std::move(backend), config.record_path);
  }

  std::vector<std::string> paths;
  for (int rep = 0; rep < config.repetitions; ++rep) {
    ServiceInstance service = ServiceInstance::load_dir(config.service_dir);
    InProcessEvaluator evaluator(service);
    SearchConfig search = config.search;
    search.seed = config.search.seed + static_cast<std::uint64_t>(rep);
    std::string path = transcript_path(config, rep);
    TranscriptWriter writer(path);
    run_search(service, search, evaluator, backend.get(), &writer);
    paths.push_back(path);
  }

  CorpusManifest manifest;
  std::string manifest_path = config.service_dir + "/manifest.json";
  if (std::filesystem::exists(manifest_path)) manifest = CorpusManifest::load_file(manifest_path);

  Metrics metrics = compute_metrics(paths, manifest);
  std::string stem = config.out_dir + "/metrics_" + to_string(config.search.mode);
  emit_report({metrics}, ReportFormat::TableText, stem + ".txt");
  emit_report({metrics}, ReportFormat::Csv, stem + ".csv");
  return metrics;
}

}  // namespace miohint
