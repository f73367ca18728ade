#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tenantsched/cluster.hpp"
#include "tenantsched/mdp.hpp"
#include "tenantsched/ppo.hpp"
#include "tenantsched/task.hpp"
#include "tenantsched/workload.hpp"

namespace tsched::harness {

// Everything a run needs, loaded from one JSON file. Numeric fields left at
// their zero "auto" sentinels are resolved downstream (mdp defaults from the
// trace, fluctuation horizon from the trace end).
struct RunConfig {
  sim::ClusterConfig cluster;
  std::string trace_path;
  std::optional<workload::WorkloadConfig> workload;
  mdp::RewardWeights weights;
  mdp::MdpConfig mdp;
  ppo::PPOHyper ppo;
  std::vector<std::string> schedulers{"fifo", "least_loaded", "round_robin",
                                      "random", "tenant_fair"};
  std::uint64_t seed = 1;
  std::vector<std::uint64_t> seeds;
  std::string out_dir = "out";
  std::string checkpoint;
  int episodes_per_seed = 1;
  std::string sweep_mode;
  workload::FluctuationConfig fluctuation;
  TimeMs jfi_window_ms = 10000;
};

RunConfig load_config(const std::string& path);

// Command-line overrides: --seed replaces every seed-like field (and
// collapses the seeds list), --out replaces out_dir, --schedulers replaces
// the scheduler list.
void apply_overrides(RunConfig& config, std::optional<std::uint64_t> seed,
                     const std::string& out_dir,
                     const std::vector<std::string>& schedulers);

// Trace from trace_path if set, else generated from the workload section.
std::vector<TaskSpec> resolve_trace(const RunConfig& config);

// Seed list for multi-seed commands; falls back to the single seed.
std::vector<std::uint64_t> effective_seeds(const RunConfig& config);

std::string checkpoint_path(const RunConfig& config);

}  // namespace tsched::harness
