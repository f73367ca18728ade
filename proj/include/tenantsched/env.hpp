#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "tenantsched/cluster.hpp"
#include "tenantsched/mdp.hpp"
#include "tenantsched/task.hpp"

namespace tsched::mdp {

struct EnvConfig {
  sim::ClusterConfig cluster;
  std::vector<TaskSpec> trace;
  std::vector<sim::SimEvent> capacity_events;
  MdpConfig mdp;
  RewardWeights weights;
};

// Fills auto defaults: queue_norm = 2 x node count, d_ref_ms = mean trace
// task duration, max_priority = largest priority in the trace.
MdpConfig resolve_mdp_defaults(const MdpConfig& config,
                               const sim::ClusterConfig& cluster,
                               const std::vector<TaskSpec>& trace);

struct StepResult {
  double reward = 0.0;
  bool done = false;
  RewardTerms terms;
};

// Episode view of the simulator: one step per head-of-queue decision, reward
// evaluated on the state reached after the action settles.
class SchedulingEnv {
 public:
  explicit SchedulingEnv(EnvConfig config);

  void reset();
  StepResult step(std::size_t action_index);

  bool done() const { return !decision_.has_value(); }
  const Observation& observation() const;
  const ActionMask& mask() const;
  TaskId current_task() const;
  std::size_t action_count() const;
  std::size_t observation_dim() const;

  const sim::ClusterState& state() const { return *state_; }
  sim::MetricsSnapshot metrics() const;
  const MdpConfig& mdp_config() const { return config_.mdp; }
  const RewardWeights& weights() const { return config_.weights; }

 private:
  void refresh_decision();

  EnvConfig config_;
  std::unique_ptr<sim::ClusterState> state_;
  std::optional<sim::DecisionPoint> decision_;
  Observation obs_;
  ActionMask mask_;
};

}  // namespace tsched::mdp
