#include "tenantsched/baselines.hpp"

#include <limits>
#include <stdexcept>
#include <vector>

namespace tsched::baselines {

namespace {

std::size_t defer_of(const mdp::ActionMask& mask) { return mask.defer_index(); }

std::size_t least_loaded_feasible(const sim::ClusterState& state,
                                  const mdp::ActionMask& mask) {
  const auto& nodes = state.nodes();
  std::size_t best = defer_of(mask);
  double best_load = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!mask.at(i)) continue;
    const double load = nodes[i].load_fraction();
    if (load < best_load) {
      best_load = load;
      best = i;
    }
  }
  return best;
}

}  // namespace

std::size_t FifoFirstFit::decide(const sim::ClusterState&, TaskId,
                                 const mdp::ActionMask& mask, Rng&) {
  for (std::size_t i = 0; i + 1 < mask.size(); ++i) {
    if (mask.at(i)) return i;
  }
  return defer_of(mask);
}

std::size_t LeastLoaded::decide(const sim::ClusterState& state, TaskId,
                                const mdp::ActionMask& mask, Rng&) {
  return least_loaded_feasible(state, mask);
}

std::size_t RoundRobin::decide(const sim::ClusterState&, TaskId,
                               const mdp::ActionMask& mask, Rng&) {
  const long n = static_cast<long>(mask.size()) - 1;
  if (n <= 0) return defer_of(mask);
  for (long off = 1; off <= n; ++off) {
    const long i = (cursor_ + off) % n;
    if (mask.at(static_cast<std::size_t>(i))) {
      cursor_ = i;
      return static_cast<std::size_t>(i);
    }
  }
  return defer_of(mask);
}

std::size_t RandomFit::decide(const sim::ClusterState&, TaskId,
                              const mdp::ActionMask& mask, Rng& rng) {
  std::vector<std::size_t> feasible;
  for (std::size_t i = 0; i + 1 < mask.size(); ++i) {
    if (mask.at(i)) feasible.push_back(i);
  }
  if (feasible.empty()) return defer_of(mask);
  return feasible[rng.uniform_index(feasible.size())];
}

std::size_t TenantFair::decide(const sim::ClusterState& state, TaskId task_id,
                               const mdp::ActionMask& mask, Rng&) {
  const TaskRuntime& task = state.task(task_id);
  double min_share = std::numeric_limits<double>::infinity();
  for (TaskId queued_id : state.queue()) {
    const TaskRuntime& queued = state.task(queued_id);
    min_share = std::min(
        min_share, state.tenant_dominant_share(queued.spec.tenant_id));
  }
  const double own = state.tenant_dominant_share(task.spec.tenant_id);
  if (own > min_share + 1e-12) return defer_of(mask);
  return least_loaded_feasible(state, mask);
}

std::unique_ptr<SchedulerPolicy> make_scheduler(const std::string& name) {
  if (name == "fifo") return std::make_unique<FifoFirstFit>();
  if (name == "least_loaded") return std::make_unique<LeastLoaded>();
  if (name == "round_robin") return std::make_unique<RoundRobin>();
  if (name == "random") return std::make_unique<RandomFit>();
  if (name == "tenant_fair") return std::make_unique<TenantFair>();
  throw std::invalid_argument("unknown scheduler '" + name + "'");
}

EpisodeResult run_episode(mdp::SchedulingEnv& env, SchedulerPolicy& policy,
                          Rng& rng) {
  env.reset();
  policy.reset();
  EpisodeResult res;
  while (!env.done()) {
    const std::size_t a =
        policy.decide(env.state(), env.current_task(), env.mask(), rng);
    if (a >= env.mask().size() || !env.mask().at(a)) {
      throw std::logic_error("policy '" + policy.name() +
                             "' chose a masked action");
    }
    const mdp::StepResult sr = env.step(a);
    res.total_reward += sr.reward;
    ++res.steps;
  }
  res.metrics = env.metrics();
  return res;
}

}  // namespace tsched::baselines
