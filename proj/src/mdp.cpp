#include "tenantsched/mdp.hpp"

#include <algorithm>
#include <stdexcept>

namespace tsched::mdp {

namespace {

double clip01(double v) { return std::clamp(v, 0.0, 1.0); }

}  // namespace

Observation featurize(const sim::ClusterState& state, TaskId task_id,
                      const MdpConfig& cfg) {
  const auto& nodes = state.nodes();
  const TaskRuntime& rt = state.task(task_id);

  Observation obs;
  obs.reserve(observation_dim(nodes.size()));

  for (const sim::NodeState& node : nodes) {
    ResourceVector eff = node.effective_capacity();
    for (int d = 0; d < ResourceVector::kDims; ++d) {
      obs.push_back(eff[d] > 0.0 ? clip01((eff[d] - node.allocated[d]) / eff[d])
                                 : 0.0);
    }
  }

  double queue_norm = cfg.queue_norm > 0.0 ? cfg.queue_norm : 1.0;
  obs.push_back(clip01(static_cast<double>(state.queue().size()) / queue_norm));

  ResourceVector mean_cap;
  for (const sim::NodeState& node : nodes) mean_cap += node.base_capacity;
  double inv_n = 1.0 / static_cast<double>(nodes.size());
  for (int d = 0; d < ResourceVector::kDims; ++d) {
    double cap = mean_cap[d] * inv_n;
    obs.push_back(cap > 0.0 ? clip01(rt.spec.demand[d] / cap) : 0.0);
  }

  double max_priority = cfg.max_priority > 0.0 ? cfg.max_priority : 1.0;
  obs.push_back(clip01(static_cast<double>(rt.spec.priority) / max_priority));
  obs.push_back(clip01(state.tenant_dominant_share(rt.spec.tenant_id)));
  return obs;
}

ActionMask action_mask(const sim::ClusterState& state, TaskId task_id) {
  const TaskRuntime& rt = state.task(task_id);
  ActionMask mask;
  mask.allowed.reserve(state.nodes().size() + 1);
  for (const sim::NodeState& node : state.nodes()) {
    mask.allowed.push_back(node.has_room(rt.spec.demand) ? 1 : 0);
  }
  mask.allowed.push_back(1);  // Defer
  return mask;
}

RewardTerms compute_reward_terms(const sim::ClusterState& state,
                                 TimeMs window_ms, double d_ref_ms) {
  if (window_ms <= 0 || d_ref_ms <= 0.0) {
    throw std::invalid_argument("window_ms and d_ref_ms must be positive");
  }
  RewardTerms terms;
  terms.utilization = sim::utilization(state);

  // D: mean over (a) waiting time of still-queued tasks and (b) delay of
  // tasks that started within the trailing window, normalized by d_ref.
  double sum = 0.0;
  std::int64_t count = 0;
  for (TaskId id : state.queue()) {
    sum += static_cast<double>(state.clock() - state.task(id).spec.submit_time_ms);
    ++count;
  }
  const auto& starts = state.start_log();
  TimeMs cutoff = state.clock() - window_ms;
  for (auto it = starts.rbegin(); it != starts.rend() && it->first >= cutoff;
       ++it) {
    sum += static_cast<double>(it->second);
    ++count;
  }
  if (count > 0) {
    terms.delay = std::clamp(sum / static_cast<double>(count) / d_ref_ms, 0.0, 1.0);
  }

  if (!state.tenant_share_integrals().empty()) {
    terms.fairness_loss = 1.0 - jain_index(state.tenant_share_integrals());
  }
  return terms;
}

double reward(const RewardTerms& terms, const RewardWeights& w) {
  return w.utilization * terms.utilization - w.delay * terms.delay -
         w.fairness * terms.fairness_loss;
}

void validate_weights(const RewardWeights& w) {
  if (w.utilization < 0.0 || w.delay < 0.0 || w.fairness < 0.0) {
    throw std::invalid_argument("reward weights must be nonnegative");
  }
  if (w.utilization == 0.0 && w.delay == 0.0 && w.fairness == 0.0) {
    throw std::invalid_argument("reward weights must not all be zero");
  }
}

}  // namespace tsched::mdp
