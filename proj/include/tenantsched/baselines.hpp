#pragma once

#include <memory>
#include <string>

#include "tenantsched/action_mask.hpp"
#include "tenantsched/cluster.hpp"
#include "tenantsched/env.hpp"
#include "tenantsched/rng.hpp"
#include "tenantsched/task.hpp"

namespace tsched::baselines {

// Common decision interface for heuristics and the learned policy. The
// returned action id indexes the mask: i < N assigns node i, i == N defers.
class SchedulerPolicy {
 public:
  virtual ~SchedulerPolicy() = default;
  virtual std::size_t decide(const sim::ClusterState& state, TaskId task_id,
                             const mdp::ActionMask& mask, Rng& rng) = 0;
  virtual void reset() {}
  virtual std::string name() const = 0;
};

class FifoFirstFit : public SchedulerPolicy {
 public:
  std::size_t decide(const sim::ClusterState&, TaskId, const mdp::ActionMask&,
                     Rng&) override;
  std::string name() const override { return "fifo"; }
};

class LeastLoaded : public SchedulerPolicy {
 public:
  std::size_t decide(const sim::ClusterState&, TaskId, const mdp::ActionMask&,
                     Rng&) override;
  std::string name() const override { return "least_loaded"; }
};

class RoundRobin : public SchedulerPolicy {
 public:
  std::size_t decide(const sim::ClusterState&, TaskId, const mdp::ActionMask&,
                     Rng&) override;
  void reset() override { cursor_ = -1; }
  std::string name() const override { return "round_robin"; }

 private:
  long cursor_ = -1;
};

class RandomFit : public SchedulerPolicy {
 public:
  std::size_t decide(const sim::ClusterState&, TaskId, const mdp::ActionMask&,
                     Rng&) override;
  std::string name() const override { return "random"; }
};

// Defers unless the task's tenant currently holds the smallest dominant
// share among tenants that still have queued work; placement then follows
// the least-loaded rule.
class TenantFair : public SchedulerPolicy {
 public:
  std::size_t decide(const sim::ClusterState&, TaskId, const mdp::ActionMask&,
                     Rng&) override;
  std::string name() const override { return "tenant_fair"; }
};

// Heuristics only; the "rl" name needs a checkpoint and is wired up by the
// caller.
std::unique_ptr<SchedulerPolicy> make_scheduler(const std::string& name);

struct EpisodeResult {
  double total_reward = 0.0;
  std::size_t steps = 0;
  sim::MetricsSnapshot metrics;
};

EpisodeResult run_episode(mdp::SchedulingEnv& env, SchedulerPolicy& policy,
                          Rng& rng);

}  // namespace tsched::baselines
