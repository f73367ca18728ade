#include "tenantsched/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace tsched::harness {

namespace {

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

}  // namespace

std::pair<double, double> mean_std(const std::vector<double>& xs) {
  if (xs.empty()) throw std::invalid_argument("mean_std of empty sample");
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  var /= static_cast<double>(xs.size());
  return {mean, std::sqrt(var)};
}

void write_report_file(const RunReport& report, const std::string& path) {
  nlohmann::ordered_json j;
  j["schema_version"] = report.schema_version;
  j["command"] = report.command;
  j["config_path"] = report.config_path;
  j["seeds"] = report.seeds;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const SchedulerResult& r : report.results) {
    nlohmann::ordered_json row;
    row["scheduler"] = r.scheduler;
    row["avg_delay_ms"] = {{"mean", r.avg_delay_ms_mean},
                           {"std", r.avg_delay_ms_std}};
    row["utilization_pct"] = {{"mean", r.utilization_pct_mean},
                              {"std", r.utilization_pct_std}};
    row["jfi"] = {{"mean", r.jfi_mean}, {"std", r.jfi_std}};
    row["mean_reward"] = {{"mean", r.mean_reward_mean},
                          {"std", r.mean_reward_std}};
    row["completed"] = r.completed_mean;
    rows.push_back(row);
  }
  j["results"] = rows;
  j["wall_clock_ms"] = report.wall_clock_ms;

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write report '" + path + "'");
  out << j.dump(2) << "\n";
  if (!out.flush()) {
    throw std::runtime_error("failed writing report '" + path + "'");
  }
}

void write_compare_csv(const std::vector<SchedulerResult>& rows,
                       const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write table '" + path + "'");
  out << "scheduler,avg_delay_ms_mean,avg_delay_ms_std,utilization_pct_mean,"
         "utilization_pct_std,jfi_mean,jfi_std,mean_reward_mean,"
         "mean_reward_std,completed_mean\n";
  for (const SchedulerResult& r : rows) {
    out << r.scheduler << ',' << fixed6(r.avg_delay_ms_mean) << ','
        << fixed6(r.avg_delay_ms_std) << ',' << fixed6(r.utilization_pct_mean)
        << ',' << fixed6(r.utilization_pct_std) << ',' << fixed6(r.jfi_mean)
        << ',' << fixed6(r.jfi_std) << ',' << fixed6(r.mean_reward_mean) << ','
        << fixed6(r.mean_reward_std) << ',' << fixed6(r.completed_mean)
        << "\n";
  }
  if (!out.flush()) {
    throw std::runtime_error("failed writing table '" + path + "'");
  }
}

std::string compare_table_text(const std::vector<SchedulerResult>& rows) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof(line), "%-14s %22s %22s %18s %22s %10s",
                "scheduler", "avg_delay_ms", "utilization_pct", "jfi",
                "mean_reward", "completed");
  out << line << "\n";
  for (const SchedulerResult& r : rows) {
    char delay[48], util[48], jfi[48], rew[48];
    std::snprintf(delay, sizeof(delay), "%.2f +- %.2f", r.avg_delay_ms_mean,
                  r.avg_delay_ms_std);
    std::snprintf(util, sizeof(util), "%.2f +- %.2f", r.utilization_pct_mean,
                  r.utilization_pct_std);
    std::snprintf(jfi, sizeof(jfi), "%.4f +- %.4f", r.jfi_mean, r.jfi_std);
    std::snprintf(rew, sizeof(rew), "%.4f +- %.4f", r.mean_reward_mean,
                  r.mean_reward_std);
    std::snprintf(line, sizeof(line), "%-14s %22s %22s %18s %22s %10.1f",
                  r.scheduler.c_str(), delay, util, jfi, rew, r.completed_mean);
    out << line << "\n";
  }
  return out.str();
}

}  // namespace tsched::harness
