#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tenantsched/cluster.hpp"
#include "tenantsched/task.hpp"

namespace tsched::workload {

// One stretch of a load schedule: arrivals are generated at `rate_per_sec`
// for `duration_ms` before the next phase begins.
struct LoadPhase {
  std::string name;
  double rate_per_sec = 0.0;
  TimeMs duration_ms = 0;
};

struct WorkloadConfig {
  std::uint32_t num_tenants = 1;
  std::vector<LoadPhase> phases;
  double cpu_min = 0.0, cpu_max = 0.0;
  double mem_min = 0.0, mem_max = 0.0;
  double disk_min = 0.0, disk_max = 0.0;
  TimeMs duration_min_ms = 1;
  TimeMs duration_max_ms = 1;
  std::uint32_t priority_min = 0;
  std::uint32_t priority_max = 9;
  std::uint64_t seed = 0;
};

// Poisson arrivals drawn independently per tenant from a tenant-specific
// stream, so adding tenants never perturbs existing ones. Tasks come back
// sorted by submit time with ids assigned in that order.
std::vector<TaskSpec> generate_workload(const WorkloadConfig& config);

struct FluctuationConfig {
  std::uint32_t num_nodes = 0;
  TimeMs horizon_ms = 0;
  TimeMs interval_ms = 0;
  double scale_min = 1.0;
  double scale_max = 1.0;
  std::uint64_t seed = 0;
};

// Capacity-scale events for every node at each interval boundary up to the
// horizon, scales uniform in [scale_min, scale_max] subset of (0, 1].
std::vector<sim::SimEvent> generate_fluctuation(const FluctuationConfig& config);

}  // namespace tsched::workload
