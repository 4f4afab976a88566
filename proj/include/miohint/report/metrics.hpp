#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "miohint/harness/service.hpp"
#include "miohint/search/transcript.hpp"

namespace miohint {

// The five reported metrics, per repetition. Target coverage uses the
// manifest's designated hard targets as the fixed primary denominator;
// the selected-targets variant (denominator = targets attempted during the
// run) is carried alongside.
struct MetricsRow {
  double line_coverage_pct = 0.0;
  double target_coverage_pct = 0.0;
  double selected_target_coverage_pct = 0.0;
  double mutation_hit_rate_pct = 0.0;
  std::int64_t mutation_count = 0;
  std::int64_t hit_count = 0;
  double avg_time_per_test_ms = 0.0;
};

struct Metrics {
  std::string service;
  std::string mode;
  std::vector<MetricsRow> reps;
  MetricsRow mean;
};

MetricsRow compute_metrics_row(const Transcript& transcript, const CorpusManifest& manifest);

// Pure function of the transcript files plus the manifest; throws
// MalformedTranscript on bad input.
Metrics compute_metrics(const std::vector<std::string>& transcript_paths,
                        const CorpusManifest& manifest);

enum class ReportFormat { TableText, Csv };

std::string render_report(const std::vector<Metrics>& all, ReportFormat format);
void emit_report(const std::vector<Metrics>& all, ReportFormat format, const std::string& path);

}  // namespace miohint
