#include "miohint/report/metrics.hpp"

#include <cstdio>
#include <fstream>
#include <set>

#include "miohint/errors.hpp"

namespace miohint {

MetricsRow compute_metrics_row(const Transcript& transcript, const CorpusManifest& manifest) {
  MetricsRow row;

  std::set<std::string> covered(transcript.end.covered_target_ids.begin(),
                                transcript.end.covered_target_ids.end());

  if (transcript.start.total_executable_lines > 0)
    row.line_coverage_pct =
        100.0 * transcript.end.covered_line_count / transcript.start.total_executable_lines;

  const auto hard = manifest.hard_target_ids();
  if (!hard.empty()) {
    std::size_t hit = 0;
    for (const auto& id : hard) hit += covered.count(id);
    row.target_coverage_pct = 100.0 * static_cast<double>(hit) / static_cast<double>(hard.size());
  }

  std::set<std::string> selected;
  std::int64_t hits = 0;
  double elapsed_sum = 0.0;
  for (const auto& a : transcript.attempts) {
    selected.insert(a.target_id);
    if (a.covered_target) ++hits;
    elapsed_sum += static_cast<double>(a.elapsed_ms);
  }
  row.mutation_count = static_cast<std::int64_t>(transcript.attempts.size());
  row.hit_count = hits;
  if (row.mutation_count > 0) {
    row.mutation_hit_rate_pct = 100.0 * static_cast<double>(hits) / static_cast<double>(row.mutation_count);
    row.avg_time_per_test_ms = elapsed_sum / static_cast<double>(row.mutation_count);
  }
  if (!selected.empty()) {
    std::size_t hit = 0;
    for (const auto& id : selected) hit += covered.count(id);
    row.selected_target_coverage_pct =
        100.0 * static_cast<double>(hit) / static_cast<double>(selected.size());
  }
  return row;
}

Metrics compute_metrics(const std::vector<std::string>& transcript_paths,
                        const CorpusManifest& manifest) {
  if (transcript_paths.empty()) throw MalformedTranscript("no transcripts given");
  Metrics m;
  for (const auto& path : transcript_paths) {
    Transcript t = Transcript::load_file(path);
    if (t.attempts.empty() && t.end.attempts_total == 0 && t.end.iterations == 0)
      throw MalformedTranscript("transcript " + path + " records no activity");
    if (m.service.empty()) {
      m.service = t.start.service;
      m.mode = t.start.mode;
    }
    m.reps.push_back(compute_metrics_row(t, manifest));
  }
  MetricsRow& mean = m.mean;
  for (const auto& r : m.reps) {
    mean.line_coverage_pct += r.line_coverage_pct;
    mean.target_coverage_pct += r.target_coverage_pct;
    mean.selected_target_coverage_pct += r.selected_target_coverage_pct;
    mean.mutation_hit_rate_pct += r.mutation_hit_rate_pct;
    mean.mutation_count += r.mutation_count;
    mean.hit_count += r.hit_count;
    mean.avg_time_per_test_ms += r.avg_time_per_test_ms;
  }
  const double n = static_cast<double>(m.reps.size());
  mean.line_coverage_pct /= n;
  mean.target_coverage_pct /= n;
  mean.selected_target_coverage_pct /= n;
  mean.mutation_hit_rate_pct /= n;
  mean.avg_time_per_test_ms /= n;
  mean.mutation_count = static_cast<std::int64_t>(static_cast<double>(mean.mutation_count) / n + 0.5);
  mean.hit_count = static_cast<std::int64_t>(static_cast<double>(mean.hit_count) / n + 0.5);
  return m;
}

namespace {

std::string fmt2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

void append_row(std::string& out, ReportFormat format, const std::string& sut,
                const std::string& mode, const std::string& rep, const MetricsRow& r) {
  if (format == ReportFormat::Csv) {
    out += sut + "," + mode + "," + rep + "," + fmt2(r.line_coverage_pct) + "," +
           fmt2(r.target_coverage_pct) + "," + fmt2(r.mutation_hit_rate_pct) + "," +
           std::to_string(r.mutation_count) + "," + fmt2(r.avg_time_per_test_ms) + "," +
           fmt2(r.selected_target_coverage_pct) + "\n";
    return;
  }
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%-16s %-14s %-5s %9s %9s %9s %10lld %9s\n", sut.c_str(),
                mode.c_str(), rep.c_str(), fmt2(r.line_coverage_pct).c_str(),
                fmt2(r.target_coverage_pct).c_str(), fmt2(r.mutation_hit_rate_pct).c_str(),
                static_cast<long long>(r.mutation_count), fmt2(r.avg_time_per_test_ms).c_str());
  out += buf;
}

}  // namespace

std::string render_report(const std::vector<Metrics>& all, ReportFormat format) {
  std::string out;
  if (format == ReportFormat::Csv) {
    out += "sut,mode,rep,line_coverage_pct,target_coverage_pct,mutation_hit_rate_pct,"
           "mutation_count,avg_time_per_test_ms,selected_target_coverage_pct\n";
  } else {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%-16s %-14s %-5s %9s %9s %9s %10s %9s\n", "sut", "mode", "rep",
                  "lc_pct", "tc_pct", "mhr_pct", "mutations", "avg_ms");
    out += buf;
  }
  for (const auto& m : all) {
    for (std::size_t i = 0; i < m.reps.size(); ++i)
      append_row(out, format, m.service, m.mode, std::to_string(i), m.reps[i]);
    append_row(out, format, m.service, m.mode, "mean", m.mean);
  }
  return out;
}

void emit_report(const std::vector<Metrics>& all, ReportFormat format, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write report " + path);
  out << render_report(all, format);
  if (!out) throw IoError("failed writing report " + path);
}

}  // namespace miohint
