#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <vector>

#include "tenantsched/baselines.hpp"
#include "tenantsched/env.hpp"
#include "tenantsched/mlp.hpp"
#include "tenantsched/optimizer.hpp"
#include "tenantsched/rng.hpp"

namespace tsched::ppo {

struct Transition {
  mdp::Observation obs;
  mdp::ActionMask mask;
  std::size_t action = 0;
  double log_prob_old = 0.0;
  double reward = 0.0;
  double value = 0.0;
  bool done = false;
  mdp::RewardTerms terms;
};

struct RolloutBuffer {
  std::vector<Transition> transitions;
  // Value estimate of the state after the last transition; 0 if it was done.
  double bootstrap_value = 0.0;
};

struct AdvantageEstimates {
  std::vector<double> advantages;
  std::vector<double> returns;
};

struct PPOHyper {
  double gamma = 0.99;
  double lambda = 0.95;
  double eps_clip = 0.2;
  int epochs_per_update = 4;
  int minibatch_size = 64;
  double learning_rate = 3e-4;
  double value_coef = 0.5;
  double entropy_coef = 0.01;
  int horizon = 512;
  int updates = 50;
  double max_grad_norm = 0.5;
  std::size_t hidden_width = 64;
  std::uint64_t seed = 0;
};

void validate(const PPOHyper& hyper);

RolloutBuffer collect_rollout(mdp::SchedulingEnv& env,
                              const policy::MLPParams& params,
                              std::size_t horizon, Rng& rng);

AdvantageEstimates compute_advantages(const RolloutBuffer& buffer,
                                      double gamma, double lambda);

// min(p * adv, clip(p, 1-eps, 1+eps) * adv) with p the probability ratio.
double clipped_surrogate(double log_prob_new, double log_prob_old,
                         double advantage, double eps_clip);

struct LossReport {
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  double total = 0.0;
};

// Loss (and, when `grads` is given, its exact gradient) over one minibatch.
// `std_advantages` aligns with `indices`; `returns` aligns with the buffer.
LossReport ppo_batch_loss(const policy::MLPParams& params,
                          const RolloutBuffer& buffer,
                          const std::vector<std::size_t>& indices,
                          const std::vector<double>& std_advantages,
                          const std::vector<double>& returns, double eps_clip,
                          double value_coef, double entropy_coef,
                          policy::MLPParams* grads);

LossReport update(policy::MLPParams& params, policy::AdamOptimizer& opt,
                  const RolloutBuffer& buffer,
                  const AdvantageEstimates& advantages, const PPOHyper& hyper,
                  Rng& shuffle_rng);

struct CurvePoint {
  int update = 0;
  double mean_reward = 0.0;
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
};

struct TrainResult {
  policy::MLPParams params;
  std::vector<CurvePoint> curve;
};

using EnvFactory = std::function<std::unique_ptr<mdp::SchedulingEnv>()>;
using UpdateCallback = std::function<void(const CurvePoint&)>;

TrainResult train(const EnvFactory& env_factory, const PPOHyper& hyper,
                  const UpdateCallback& on_update = {});

void write_curve(const std::vector<CurvePoint>& curve, std::ostream& out);
void write_curve_file(const std::vector<CurvePoint>& curve,
                      const std::string& path);

// Decision adapter for a trained network: greedy argmax or sampled actions.
class RlPolicy : public baselines::SchedulerPolicy {
 public:
  RlPolicy(policy::MLPParams params, mdp::MdpConfig config, bool deterministic)
      : params_(std::move(params)),
        config_(config),
        deterministic_(deterministic) {}

  std::size_t decide(const sim::ClusterState& state, TaskId task_id,
                     const mdp::ActionMask& mask, Rng& rng) override;
  std::string name() const override { return "rl"; }

  const policy::MLPParams& params() const { return params_; }

 private:
  policy::MLPParams params_;
  mdp::MdpConfig config_;
  bool deterministic_;
};

struct EvalResult {
  double mean_delay_ms = 0.0;
  double mean_utilization = 0.0;
  double mean_jfi = 0.0;
  double mean_completed = 0.0;
  double mean_episode_reward = 0.0;
  std::vector<sim::MetricsSnapshot> per_episode;
  std::vector<double> episode_rewards;
};

EvalResult evaluate(const policy::MLPParams& params, mdp::SchedulingEnv& env,
                    int episodes, bool deterministic, Rng& rng);

EvalResult evaluate_policy(mdp::SchedulingEnv& env,
                           baselines::SchedulerPolicy& policy, int episodes,
                           Rng& rng);

}  // namespace tsched::ppo
