#include "tenantsched/workload.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tenantsched/rng.hpp"

namespace tsched::workload {

namespace {

void validate_workload_config(const WorkloadConfig& c) {
  if (c.num_tenants == 0) {
    throw std::invalid_argument("workload needs at least one tenant");
  }
  if (c.phases.empty()) {
    throw std::invalid_argument("workload needs at least one load phase");
  }
  for (const LoadPhase& p : c.phases) {
    if (p.name != "low" && p.name != "med" && p.name != "high") {
      throw std::invalid_argument("phase name must be low, med, or high, got '" +
                                  p.name + "'");
    }
    if (p.rate_per_sec < 0.0) {
      throw std::invalid_argument("phase '" + p.name + "' has negative rate");
    }
    if (p.duration_ms <= 0) {
      throw std::invalid_argument("phase '" + p.name + "' has nonpositive duration");
    }
  }
  auto check_range = [](double lo, double hi, const char* what) {
    if (lo < 0.0 || hi < lo) {
      throw std::invalid_argument(std::string("invalid ") + what + " range");
    }
  };
  check_range(c.cpu_min, c.cpu_max, "cpu");
  check_range(c.mem_min, c.mem_max, "mem");
  check_range(c.disk_min, c.disk_max, "disk");
  if (c.cpu_max <= 0.0 && c.mem_max <= 0.0 && c.disk_max <= 0.0) {
    throw std::invalid_argument("demand ranges cannot all be zero");
  }
  if (c.duration_min_ms <= 0 || c.duration_max_ms < c.duration_min_ms) {
    throw std::invalid_argument("invalid duration range");
  }
  if (c.priority_max < c.priority_min) {
    throw std::invalid_argument("invalid priority range");
  }
}

}  // namespace

std::vector<TaskSpec> generate_workload(const WorkloadConfig& config) {
  validate_workload_config(config);

  std::vector<TaskSpec> tasks;
  for (std::uint32_t tenant = 0; tenant < config.num_tenants; ++tenant) {
    Rng rng(Rng::derive(config.seed, tenant));
    double phase_start_ms = 0.0;
    for (const LoadPhase& phase : config.phases) {
      const double phase_end_ms =
          phase_start_ms + static_cast<double>(phase.duration_ms);
      if (phase.rate_per_sec > 0.0) {
        const double rate_per_ms = phase.rate_per_sec / 1000.0;
        double t = phase_start_ms + rng.exponential(rate_per_ms);
        while (t < phase_end_ms) {
          TaskSpec task;
          task.tenant_id = tenant;
          task.submit_time_ms = static_cast<TimeMs>(std::floor(t));
          task.duration_ms =
              rng.uniform_int(config.duration_min_ms, config.duration_max_ms);
          task.priority = static_cast<std::uint32_t>(
              rng.uniform_int(config.priority_min, config.priority_max));
          task.demand.cpu = rng.uniform(config.cpu_min, config.cpu_max);
          task.demand.mem = rng.uniform(config.mem_min, config.mem_max);
          task.demand.disk = rng.uniform(config.disk_min, config.disk_max);
          tasks.push_back(task);
          t += rng.exponential(rate_per_ms);
        }
      }
      phase_start_ms = phase_end_ms;
    }
  }

  std::stable_sort(tasks.begin(), tasks.end(),
                   [](const TaskSpec& a, const TaskSpec& b) {
                     if (a.submit_time_ms != b.submit_time_ms) {
                       return a.submit_time_ms < b.submit_time_ms;
                     }
                     return a.tenant_id < b.tenant_id;
                   });
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    tasks[i].task_id = static_cast<TaskId>(i);
  }
  return tasks;
}

std::vector<sim::SimEvent> generate_fluctuation(const FluctuationConfig& config) {
  if (config.num_nodes == 0) {
    throw std::invalid_argument("fluctuation needs at least one node");
  }
  if (config.horizon_ms <= 0 || config.interval_ms <= 0) {
    throw std::invalid_argument("fluctuation horizon and interval must be positive");
  }
  if (!(config.scale_min > 0.0) || config.scale_max > 1.0 ||
      config.scale_max < config.scale_min) {
    throw std::invalid_argument("fluctuation scales must satisfy 0 < min <= max <= 1");
  }

  std::vector<sim::SimEvent> events;
  for (std::uint32_t node = 0; node < config.num_nodes; ++node) {
    Rng rng(Rng::derive(config.seed, 1000 + node));
    for (TimeMs t = config.interval_ms; t <= config.horizon_ms;
         t += config.interval_ms) {
      const double scale = rng.uniform(config.scale_min, config.scale_max);
      events.push_back(sim::SimEvent::capacity_change(t, node, scale));
    }
  }
  std::sort(events.begin(), events.end(),
            [](const sim::SimEvent& a, const sim::SimEvent& b) {
              if (a.time != b.time) return a.time < b.time;
              return a.id < b.id;
            });
  return events;
}

}  // namespace tsched::workload
