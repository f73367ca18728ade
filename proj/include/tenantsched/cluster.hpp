#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "tenantsched/resources.hpp"
#include "tenantsched/task.hpp"

namespace tsched::sim {

struct NodeState {
  NodeId node_id = 0;
  ResourceVector base_capacity;
  double capacity_scale = 1.0;  // in (0, 1]
  ResourceVector allocated;
  std::set<TaskId> running;

  ResourceVector effective_capacity() const {
    return base_capacity * capacity_scale;
  }

  // True iff the demand fits into the free effective capacity. A node left
  // over-subscribed by a capacity drop accepts nothing until completions
  // drain it back under the effective bound.
  bool has_room(const ResourceVector& demand) const {
    ResourceVector eff = effective_capacity();
    return allocated.cpu + demand.cpu <= eff.cpu &&
           allocated.mem + demand.mem <= eff.mem &&
           allocated.disk + demand.disk <= eff.disk;
  }

  // Mean allocated fraction over dimensions with positive effective capacity.
  double load_fraction() const;
};

struct SimEvent {
  // Rank order is the tie-break order at equal timestamps.
  enum class Kind : int { kCompletion = 0, kCapacityChange = 1, kArrival = 2 };

  TimeMs time = 0;
  Kind kind = Kind::kArrival;
  std::uint64_t id = 0;    // task id (completion/arrival) or node id
  double new_scale = 1.0;  // capacity change only
  TaskSpec task;           // arrival only

  static SimEvent arrival(const TaskSpec& spec) {
    SimEvent e;
    e.time = spec.submit_time_ms;
    e.kind = Kind::kArrival;
    e.id = spec.task_id;
    e.task = spec;
    return e;
  }

  static SimEvent completion(TimeMs time, TaskId task_id) {
    SimEvent e;
    e.time = time;
    e.kind = Kind::kCompletion;
    e.id = task_id;
    return e;
  }

  static SimEvent capacity_change(TimeMs time, NodeId node, double scale) {
    SimEvent e;
    e.time = time;
    e.kind = Kind::kCapacityChange;
    e.id = node;
    e.new_scale = scale;
    return e;
  }
};

struct ClusterConfig {
  std::vector<ResourceVector> node_capacities;
  std::vector<TenantId> tenants;
};

struct MetricsSnapshot {
  double mean_delay_ms = 0.0;
  double utilization_time_avg = 0.0;
  double jfi_final = 1.0;
  std::int64_t completed_count = 0;

  bool operator==(const MetricsSnapshot& o) const {
    return mean_delay_ms == o.mean_delay_ms &&
           utilization_time_avg == o.utilization_time_avg &&
           jfi_final == o.jfi_final && completed_count == o.completed_count;
  }
};

struct DecisionPoint {
  TimeMs clock = 0;
  TaskId task_id = 0;
};

// Scheduler action for one decision point.
struct Action {
  bool defer = false;
  NodeId node = 0;

  static Action assign(NodeId n) { return Action{false, n}; }
  static Action make_defer() { return Action{true, 0}; }
};

// Deterministic discrete-event simulation of a multi-node multi-tenant
// cluster. Single-threaded; distinct instances are independent.
class ClusterState {
 public:
  // Advances past pending events until a queued task awaits a decision.
  // Returns nullopt once the run is over (all work drained, or no queued
  // task can ever start because nothing is running and no events remain).
  std::optional<DecisionPoint> next_decision();

  // Applies the scheduler's choice for the current head-of-queue task.
  // Assign starts the task now; Defer moves it to the queue tail and, once
  // every queued task has been deferred with no intervening state change,
  // advances the clock to the next event.
  void apply_action(TaskId task_id, const Action& action);

  TimeMs clock() const { return clock_; }
  const std::vector<NodeState>& nodes() const { return nodes_; }
  const std::deque<TaskId>& queue() const { return queue_; }
  const std::vector<TenantId>& tenants() const { return tenants_; }
  const TaskRuntime& task(TaskId id) const;
  bool has_pending_events() const { return !events_.empty(); }

  std::int64_t arrived_count() const { return arrived_; }
  std::int64_t completed_count() const { return completed_; }
  std::int64_t running_count() const { return running_; }

  // Instantaneous dominant share of one tenant: max over dimensions of
  // (tenant allocation / total cluster base capacity).
  double tenant_dominant_share(TenantId tenant) const;

  // Cumulative dominant-share-time integral per tenant, aligned with
  // tenants(). Basis of the fairness accounting.
  const std::vector<double>& tenant_share_integrals() const {
    return share_integrals_;
  }

  // (start_time, delay) per started task, append-ordered by start time.
  const std::vector<std::pair<TimeMs, TimeMs>>& start_log() const {
    return start_log_;
  }

  double mean_completed_delay_ms() const {
    return completed_ > 0 ? delay_sum_ms_ / static_cast<double>(completed_)
                          : 0.0;
  }

  // Integral of utilization over elapsed time.
  double utilization_integral() const { return utilization_integral_; }

  std::size_t tenant_index(TenantId tenant) const;

  // Throws if a structural invariant is broken. Checks the effective
  // capacity bound only when `strict_effective_capacity` (runs without
  // capacity fluctuation; a scale drop may legally over-subscribe a node).
  void validate(bool strict_effective_capacity = true) const;

  friend ClusterState init_cluster(const ClusterConfig& config,
                                   std::vector<TaskSpec> trace,
                                   const std::vector<SimEvent>& extra_events);

 private:
  struct EventOrder {
    bool operator()(const std::pair<SimEvent, std::uint64_t>& a,
                    const std::pair<SimEvent, std::uint64_t>& b) const;
  };

  void push_event(const SimEvent& e);
  // Applies all events at the next pending timestamp. Returns false when no
  // events remain.
  bool advance_to_next_event_batch();
  void advance_time_to(TimeMs t);
  void apply_event(const SimEvent& e);
  void note_state_change() { deferred_since_change_.clear(); }

  TimeMs clock_ = 0;
  std::vector<NodeState> nodes_;
  std::deque<TaskId> queue_;
  std::map<TaskId, TaskRuntime> tasks_;
  std::priority_queue<std::pair<SimEvent, std::uint64_t>,
                      std::vector<std::pair<SimEvent, std::uint64_t>>,
                      EventOrder>
      events_;
  std::uint64_t event_seq_ = 0;

  std::vector<TenantId> tenants_;
  std::map<TenantId, std::size_t> tenant_index_;
  std::vector<ResourceVector> tenant_allocated_;
  std::vector<double> share_integrals_;
  ResourceVector total_base_capacity_;

  std::int64_t arrived_ = 0;
  std::int64_t completed_ = 0;
  std::int64_t running_ = 0;
  double delay_sum_ms_ = 0.0;
  double utilization_integral_ = 0.0;
  std::vector<std::pair<TimeMs, TimeMs>> start_log_;

  std::unordered_set<TaskId> deferred_since_change_;
  bool stuck_ = false;
};

// Builds the initial state: clock 0, every trace entry enqueued as an
// arrival, plus any pre-scheduled capacity-change events. The trace is
// sorted by submit time if needed. Rejects duplicate task ids, invalid
// task specs, and non-positive node capacities.
ClusterState init_cluster(const ClusterConfig& config,
                          std::vector<TaskSpec> trace,
                          const std::vector<SimEvent>& extra_events = {});

// Mean over nodes and resource dimensions of allocated / effective
// capacity, zero-capacity dimensions excluded, each ratio clipped to 1.
double utilization(const ClusterState& state);

// Metrics at the current point of the run; callable at any decision point
// or at the end.
MetricsSnapshot episode_metrics(const ClusterState& state);

// Structured text snapshot for debugging and test fixtures.
std::string dump(const ClusterState& state);

}  // namespace tsched::sim
