#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace tsched::harness {

// Aggregated evaluation of one scheduler across seeds.
struct SchedulerResult {
  std::string scheduler;
  double avg_delay_ms_mean = 0.0;
  double avg_delay_ms_std = 0.0;
  double utilization_pct_mean = 0.0;
  double utilization_pct_std = 0.0;
  double jfi_mean = 0.0;
  double jfi_std = 0.0;
  double mean_reward_mean = 0.0;
  double mean_reward_std = 0.0;
  double completed_mean = 0.0;
};

// Structured run record. wall_clock_ms is the only field allowed to differ
// between byte-compared reruns, so it stays out of the data files and lives
// only here.
struct RunReport {
  int schema_version = 1;
  std::string command;
  std::string config_path;
  std::vector<std::uint64_t> seeds;
  std::vector<SchedulerResult> results;
  std::int64_t wall_clock_ms = 0;
};

void write_report_file(const RunReport& report, const std::string& path);

// Comparison table rows: one line per scheduler, fixed 6-decimal floats.
void write_compare_csv(const std::vector<SchedulerResult>& rows,
                       const std::string& path);
std::string compare_table_text(const std::vector<SchedulerResult>& rows);

// Mean and population standard deviation.
std::pair<double, double> mean_std(const std::vector<double>& xs);

}  // namespace tsched::harness
