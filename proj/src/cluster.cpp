#include "tenantsched/cluster.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "tenantsched/fairness.hpp"
#include "tenantsched/text.hpp"

namespace tsched::sim {

namespace {

constexpr double kEps = 1e-9;

std::string describe(const ResourceVector& r) {
  return "(" + format_double(r.cpu) + "," + format_double(r.mem) + "," +
         format_double(r.disk) + ")";
}

}  // namespace

double NodeState::load_fraction() const {
  ResourceVector eff = effective_capacity();
  double sum = 0.0;
  int dims = 0;
  for (int d = 0; d < ResourceVector::kDims; ++d) {
    if (eff[d] > 0.0) {
      sum += allocated[d] / eff[d];
      ++dims;
    }
  }
  return dims > 0 ? sum / dims : 0.0;
}

bool ClusterState::EventOrder::operator()(
    const std::pair<SimEvent, std::uint64_t>& a,
    const std::pair<SimEvent, std::uint64_t>& b) const {
  // priority_queue pops the "largest"; invert so the smallest key pops first.
  auto key = [](const std::pair<SimEvent, std::uint64_t>& p) {
    return std::make_tuple(p.first.time, static_cast<int>(p.first.kind),
                           p.first.id, p.second);
  };
  return key(a) > key(b);
}

void ClusterState::push_event(const SimEvent& e) {
  if (e.time < clock_) {
    throw std::logic_error("event scheduled in the past at t=" +
                           std::to_string(e.time));
  }
  events_.push({e, event_seq_++});
}

const TaskRuntime& ClusterState::task(TaskId id) const {
  auto it = tasks_.find(id);
  if (it == tasks_.end()) {
    throw std::invalid_argument("unknown task id " + std::to_string(id));
  }
  return it->second;
}

std::size_t ClusterState::tenant_index(TenantId tenant) const {
  auto it = tenant_index_.find(tenant);
  if (it == tenant_index_.end()) {
    throw std::invalid_argument("unknown tenant id " + std::to_string(tenant));
  }
  return it->second;
}

double ClusterState::tenant_dominant_share(TenantId tenant) const {
  const ResourceVector& alloc = tenant_allocated_[tenant_index(tenant)];
  double share = 0.0;
  for (int d = 0; d < ResourceVector::kDims; ++d) {
    if (total_base_capacity_[d] > 0.0) {
      share = std::max(share, alloc[d] / total_base_capacity_[d]);
    }
  }
  return share;
}

void ClusterState::advance_time_to(TimeMs t) {
  if (t < clock_) {
    throw std::logic_error("clock would move backwards");
  }
  TimeMs dt = t - clock_;
  if (dt > 0) {
    double span = static_cast<double>(dt);
    utilization_integral_ += utilization(*this) * span;
    for (std::size_t k = 0; k < tenants_.size(); ++k) {
      share_integrals_[k] += tenant_dominant_share(tenants_[k]) * span;
    }
    clock_ = t;
  }
}

void ClusterState::apply_event(const SimEvent& e) {
  switch (e.kind) {
    case SimEvent::Kind::kArrival: {
      TaskRuntime rt;
      rt.spec = e.task;
      rt.phase = TaskPhase::kQueued;
      tasks_.emplace(e.task.task_id, rt);
      queue_.push_back(e.task.task_id);
      ++arrived_;
      break;
    }
    case SimEvent::Kind::kCompletion: {
      TaskRuntime& rt = tasks_.at(e.id);
      assert(rt.phase == TaskPhase::kRunning);
      NodeState& node = nodes_[rt.node];
      node.allocated -= rt.spec.demand;
      node.running.erase(e.id);
      tenant_allocated_[tenant_index(rt.spec.tenant_id)] -= rt.spec.demand;
      rt.phase = TaskPhase::kCompleted;
      rt.end_time_ms = clock_;
      assert(rt.end_time_ms == rt.start_time_ms + rt.spec.duration_ms);
      delay_sum_ms_ += static_cast<double>(rt.delay_ms());
      ++completed_;
      --running_;
      break;
    }
    case SimEvent::Kind::kCapacityChange: {
      if (e.id >= nodes_.size()) {
        throw std::invalid_argument("capacity change for unknown node " +
                                    std::to_string(e.id));
      }
      if (!(e.new_scale > 0.0 && e.new_scale <= 1.0)) {
        throw std::invalid_argument("capacity scale must be in (0,1], got " +
                                    format_double(e.new_scale));
      }
      // A no-op rescale is not a state change: it must not wake deferred
      // tasks, so a degenerate fluctuation schedule replays exactly like no
      // schedule at all.
      if (nodes_[e.id].capacity_scale == e.new_scale) return;
      nodes_[e.id].capacity_scale = e.new_scale;
      break;
    }
  }
  note_state_change();
}

bool ClusterState::advance_to_next_event_batch() {
  if (events_.empty()) return false;
  TimeMs t = events_.top().first.time;
  advance_time_to(t);
  while (!events_.empty() && events_.top().first.time == t) {
    SimEvent e = events_.top().first;
    events_.pop();
    apply_event(e);
  }
  return true;
}

std::optional<DecisionPoint> ClusterState::next_decision() {
  while (true) {
    assert(arrived_ == static_cast<std::int64_t>(queue_.size()) + running_ +
                           completed_);
    if (!queue_.empty()) {
      if (stuck_) return std::nullopt;
      return DecisionPoint{clock_, queue_.front()};
    }
    if (!advance_to_next_event_batch()) return std::nullopt;
  }
}

void ClusterState::apply_action(TaskId task_id, const Action& action) {
  if (queue_.empty() || queue_.front() != task_id) {
    throw std::invalid_argument("task " + std::to_string(task_id) +
                                " is not the head-of-queue decision task");
  }
  TaskRuntime& rt = tasks_.at(task_id);

  if (action.defer) {
    // Advance time once the whole queue has been deferred with no state
    // change in between; otherwise deferral would livelock at a fixed clock.
    // Batches that change nothing (no-op rescales) are skipped through.
    while (deferred_since_change_.size() >= queue_.size()) {
      if (!advance_to_next_event_batch()) {
        stuck_ = true;  // nothing running, no future events: queue is frozen
        break;
      }
    }
    queue_.pop_front();
    queue_.push_back(task_id);
    deferred_since_change_.insert(task_id);
    return;
  }

  if (action.node >= nodes_.size()) {
    throw std::invalid_argument("unknown node id " + std::to_string(action.node));
  }
  NodeState& node = nodes_[action.node];
  if (!node.has_room(rt.spec.demand)) {
    throw std::invalid_argument(
        "infeasible action: task " + std::to_string(task_id) + " demand " +
        describe(rt.spec.demand) + " exceeds free capacity of node " +
        std::to_string(action.node));
  }

  queue_.pop_front();
  rt.phase = TaskPhase::kRunning;
  rt.node = action.node;
  rt.start_time_ms = clock_;
  node.allocated += rt.spec.demand;
  node.running.insert(task_id);
  tenant_allocated_[tenant_index(rt.spec.tenant_id)] += rt.spec.demand;
  ++running_;
  start_log_.emplace_back(clock_, rt.delay_ms());
  push_event(SimEvent::completion(clock_ + rt.spec.duration_ms, task_id));
  stuck_ = false;
  note_state_change();
}

void ClusterState::validate(bool strict_effective_capacity) const {
  if (clock_ < 0) throw std::logic_error("negative clock");
  if (arrived_ !=
      static_cast<std::int64_t>(queue_.size()) + running_ + completed_) {
    throw std::logic_error("conservation violated: arrived=" +
                           std::to_string(arrived_) + " queued=" +
                           std::to_string(queue_.size()) + " running=" +
                           std::to_string(running_) + " completed=" +
                           std::to_string(completed_));
  }

  std::int64_t running_total = 0;
  std::vector<ResourceVector> per_tenant(tenants_.size());
  for (const NodeState& node : nodes_) {
    ResourceVector sum;
    for (TaskId id : node.running) {
      const TaskRuntime& rt = tasks_.at(id);
      if (rt.phase != TaskPhase::kRunning || rt.node != node.node_id) {
        throw std::logic_error("running-set entry out of sync for task " +
                               std::to_string(id));
      }
      sum += rt.spec.demand;
      per_tenant[tenant_index_.at(rt.spec.tenant_id)] += rt.spec.demand;
    }
    running_total += static_cast<std::int64_t>(node.running.size());
    for (int d = 0; d < ResourceVector::kDims; ++d) {
      if (node.allocated[d] < -kEps ||
          std::abs(node.allocated[d] - sum[d]) > 1e-6) {
        throw std::logic_error("allocated out of sync with running demands");
      }
      if (node.allocated[d] > node.base_capacity[d] + 1e-6) {
        throw std::logic_error("allocation exceeds base capacity");
      }
      if (strict_effective_capacity &&
          node.allocated[d] > node.effective_capacity()[d] + 1e-6) {
        throw std::logic_error("allocation exceeds effective capacity");
      }
    }
  }
  if (running_total != running_) {
    throw std::logic_error("running counter out of sync");
  }
  for (std::size_t k = 0; k < tenants_.size(); ++k) {
    for (int d = 0; d < ResourceVector::kDims; ++d) {
      if (std::abs(per_tenant[k][d] - tenant_allocated_[k][d]) > 1e-6) {
        throw std::logic_error("tenant allocation accounting out of sync");
      }
    }
  }
  for (TaskId id : queue_) {
    if (tasks_.at(id).phase != TaskPhase::kQueued) {
      throw std::logic_error("queued task not in Queued phase");
    }
  }
}

ClusterState init_cluster(const ClusterConfig& config,
                          std::vector<TaskSpec> trace,
                          const std::vector<SimEvent>& extra_events) {
  if (config.node_capacities.empty()) {
    throw std::invalid_argument("cluster must have at least one node");
  }
  ClusterState s;
  for (std::size_t i = 0; i < config.node_capacities.size(); ++i) {
    const ResourceVector& cap = config.node_capacities[i];
    if (!cap.nonnegative() || !cap.any_positive()) {
      throw std::invalid_argument("non-positive capacity " + describe(cap) +
                                  " for node " + std::to_string(i));
    }
    NodeState node;
    node.node_id = static_cast<NodeId>(i);
    node.base_capacity = cap;
    s.nodes_.push_back(node);
    s.total_base_capacity_ += cap;
  }

  std::set<TenantId> tenant_set(config.tenants.begin(), config.tenants.end());
  std::set<TaskId> seen;
  for (const TaskSpec& t : trace) {
    if (!seen.insert(t.task_id).second) {
      throw std::invalid_argument("duplicate task id " +
                                  std::to_string(t.task_id) + " in trace");
    }
    if (t.duration_ms <= 0) {
      throw std::invalid_argument("task " + std::to_string(t.task_id) +
                                  " has non-positive duration");
    }
    if (!t.demand.nonnegative() || !t.demand.any_positive()) {
      throw std::invalid_argument("task " + std::to_string(t.task_id) +
                                  " has invalid demand " + describe(t.demand));
    }
    if (t.submit_time_ms < 0) {
      throw std::invalid_argument("task " + std::to_string(t.task_id) +
                                  " has negative submit time");
    }
    tenant_set.insert(t.tenant_id);
  }
  s.tenants_.assign(tenant_set.begin(), tenant_set.end());
  for (std::size_t k = 0; k < s.tenants_.size(); ++k) {
    s.tenant_index_[s.tenants_[k]] = k;
  }
  s.tenant_allocated_.resize(s.tenants_.size());
  s.share_integrals_.assign(s.tenants_.size(), 0.0);

  if (!std::is_sorted(trace.begin(), trace.end(),
                      [](const TaskSpec& a, const TaskSpec& b) {
                        return a.submit_time_ms < b.submit_time_ms;
                      })) {
    std::stable_sort(trace.begin(), trace.end(),
                     [](const TaskSpec& a, const TaskSpec& b) {
                       return a.submit_time_ms < b.submit_time_ms;
                     });
  }
  for (const TaskSpec& t : trace) {
    s.push_event(SimEvent::arrival(t));
  }
  for (const SimEvent& e : extra_events) {
    if (e.kind != SimEvent::Kind::kCapacityChange) {
      throw std::invalid_argument(
          "only capacity-change events may be pre-scheduled");
    }
    if (e.id >= s.nodes_.size()) {
      throw std::invalid_argument("capacity change for unknown node " +
                                  std::to_string(e.id));
    }
    if (!(e.new_scale > 0.0 && e.new_scale <= 1.0)) {
      throw std::invalid_argument("capacity scale must be in (0,1]");
    }
    s.push_event(e);
  }
  return s;
}

double utilization(const ClusterState& state) {
  double sum = 0.0;
  int terms = 0;
  for (const NodeState& node : state.nodes()) {
    ResourceVector eff = node.effective_capacity();
    for (int d = 0; d < ResourceVector::kDims; ++d) {
      if (eff[d] > 0.0) {
        sum += std::min(1.0, node.allocated[d] / eff[d]);
        ++terms;
      }
    }
  }
  return terms > 0 ? sum / terms : 0.0;
}

MetricsSnapshot episode_metrics(const ClusterState& state) {
  MetricsSnapshot m;
  m.completed_count = state.completed_count();
  m.mean_delay_ms = state.mean_completed_delay_ms();
  m.utilization_time_avg =
      state.clock() > 0
          ? state.utilization_integral() / static_cast<double>(state.clock())
          : 0.0;
  m.jfi_final = state.tenant_share_integrals().empty()
                    ? 1.0
                    : mdp::jain_index(state.tenant_share_integrals());
  return m;
}

std::string dump(const ClusterState& state) {
  std::ostringstream out;
  out << "clock " << state.clock() << "\n";
  for (const NodeState& node : state.nodes()) {
    out << "node " << node.node_id << " scale "
        << format_double(node.capacity_scale) << " cap "
        << describe(node.base_capacity) << " alloc " << describe(node.allocated)
        << " running";
    for (TaskId id : node.running) out << " " << id;
    out << "\n";
  }
  out << "queue";
  for (TaskId id : state.queue()) out << " " << id;
  out << "\ntenants";
  for (TenantId t : state.tenants()) out << " " << t;
  out << "\ncounts arrived " << state.arrived_count() << " running "
      << state.running_count() << " completed " << state.completed_count()
      << "\n";
  return out.str();
}

}  // namespace tsched::sim
