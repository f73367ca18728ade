#pragma once

#include <string>

#include "tenantsched/config.hpp"
#include "tenantsched/report.hpp"

namespace tsched::harness {

// Each command returns a process exit code: 0 iff every requested output
// was written.
int cmd_gen_trace(const RunConfig& config);
int cmd_train(const RunConfig& config, const std::string& config_path);
int cmd_eval(const RunConfig& config, const std::string& config_path);
int cmd_compare(const RunConfig& config, const std::string& config_path);
int cmd_sweep(const RunConfig& config, const std::string& config_path);

// Evaluation core shared by eval/compare/sweep: every scheduler on the same
// trace, one greedy (rl) or heuristic run per seed, mean and std across
// seeds.
std::vector<SchedulerResult> run_comparison(
    const RunConfig& config, const std::vector<TaskSpec>& trace,
    const std::vector<sim::SimEvent>& capacity_events,
    const std::vector<std::string>& schedulers);

// Cumulative fairness sampled at tumbling window boundaries: the JFI of the
// per-tenant share integrals as of the last decision at or before each
// boundary. One full episode per call.
std::vector<double> jfi_window_series(mdp::SchedulingEnv& env,
                                      baselines::SchedulerPolicy& policy,
                                      Rng& rng, TimeMs window_ms);

}  // namespace tsched::harness
