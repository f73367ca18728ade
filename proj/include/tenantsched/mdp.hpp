#pragma once

#include <vector>

#include "tenantsched/action_mask.hpp"
#include "tenantsched/cluster.hpp"
#include "tenantsched/fairness.hpp"

namespace tsched::mdp {

// Fixed-length state encoding: per node [free_cpu, free_mem, free_disk]
// as fractions of effective capacity, then queue pressure, the decision
// task's demand relative to mean node capacity, its priority, and its
// tenant's current dominant share. Every entry is clipped to [0, 1].
using Observation = std::vector<double>;

struct MdpConfig {
  double queue_norm = 0.0;    // queue length saturating the feature; 0 = auto
  double d_ref_ms = 0.0;      // delay saturating the D term; 0 = auto
  TimeMs window_ms = 10000;   // recent-start window for the D term
  double max_priority = 0.0;  // priority saturating the feature; 0 = auto
};

struct RewardWeights {
  double utilization = 1.0;  // a1
  double delay = 1.0;        // a2
  double fairness = 1.0;     // a3
};

// The three normalized objective terms, each in [0, 1].
struct RewardTerms {
  double utilization = 0.0;    // U
  double delay = 0.0;          // D
  double fairness_loss = 0.0;  // F
};

inline std::size_t observation_dim(std::size_t node_count) {
  return 3 * node_count + 6;
}

Observation featurize(const sim::ClusterState& state, TaskId task_id,
                      const MdpConfig& cfg);

ActionMask action_mask(const sim::ClusterState& state, TaskId task_id);

RewardTerms compute_reward_terms(const sim::ClusterState& state,
                                 TimeMs window_ms, double d_ref_ms);

// Immediate reward: a1*U - a2*D - a3*F.
double reward(const RewardTerms& terms, const RewardWeights& w);

void validate_weights(const RewardWeights& w);

}  // namespace tsched::mdp
