#include "tenantsched/env.hpp"

#include <algorithm>
#include <stdexcept>

namespace tsched::mdp {

MdpConfig resolve_mdp_defaults(const MdpConfig& config,
                               const sim::ClusterConfig& cluster,
                               const std::vector<TaskSpec>& trace) {
  MdpConfig out = config;
  if (out.queue_norm <= 0.0) {
    out.queue_norm = 2.0 * static_cast<double>(cluster.node_capacities.size());
  }
  if (out.d_ref_ms <= 0.0) {
    double total = 0.0;
    for (const TaskSpec& t : trace) total += static_cast<double>(t.duration_ms);
    out.d_ref_ms = trace.empty() ? 1.0 : total / static_cast<double>(trace.size());
  }
  if (out.max_priority <= 0.0) {
    std::uint32_t max_p = 1;
    for (const TaskSpec& t : trace) max_p = std::max(max_p, t.priority);
    out.max_priority = static_cast<double>(max_p);
  }
  if (out.window_ms <= 0) {
    throw std::invalid_argument("window_ms must be positive");
  }
  return out;
}

SchedulingEnv::SchedulingEnv(EnvConfig config) : config_(std::move(config)) {
  validate_weights(config_.weights);
  config_.mdp = resolve_mdp_defaults(config_.mdp, config_.cluster, config_.trace);
  reset();
}

void SchedulingEnv::reset() {
  state_ = std::make_unique<sim::ClusterState>(sim::init_cluster(
      config_.cluster, config_.trace, config_.capacity_events));
  refresh_decision();
}

void SchedulingEnv::refresh_decision() {
  decision_ = state_->next_decision();
  if (decision_) {
    obs_ = featurize(*state_, decision_->task_id, config_.mdp);
    mask_ = action_mask(*state_, decision_->task_id);
  }
}

const Observation& SchedulingEnv::observation() const {
  if (!decision_) throw std::logic_error("episode is done");
  return obs_;
}

const ActionMask& SchedulingEnv::mask() const {
  if (!decision_) throw std::logic_error("episode is done");
  return mask_;
}

TaskId SchedulingEnv::current_task() const {
  if (!decision_) throw std::logic_error("episode is done");
  return decision_->task_id;
}

std::size_t SchedulingEnv::action_count() const {
  return config_.cluster.node_capacities.size() + 1;
}

std::size_t SchedulingEnv::observation_dim() const {
  return tsched::mdp::observation_dim(config_.cluster.node_capacities.size());
}

StepResult SchedulingEnv::step(std::size_t action_index) {
  if (!decision_) throw std::logic_error("step on finished episode");
  const std::size_t n_nodes = config_.cluster.node_capacities.size();
  if (action_index > n_nodes) {
    throw std::invalid_argument("action index out of range");
  }
  const sim::Action act =
      action_index == n_nodes
          ? sim::Action::make_defer()
          : sim::Action::assign(static_cast<NodeId>(action_index));
  state_->apply_action(decision_->task_id, act);
  refresh_decision();

  StepResult res;
  res.terms = compute_reward_terms(*state_, config_.mdp.window_ms,
                                   config_.mdp.d_ref_ms);
  res.reward = reward(res.terms, config_.weights);
  res.done = !decision_.has_value();
  return res;
}

sim::MetricsSnapshot SchedulingEnv::metrics() const {
  return sim::episode_metrics(*state_);
}

}  // namespace tsched::mdp
