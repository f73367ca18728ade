#pragma once

#include <cstdint>

#include "tenantsched/resources.hpp"

namespace tsched {

using TaskId = std::uint64_t;
using TenantId = std::uint64_t;
using NodeId = std::uint32_t;
using TimeMs = std::int64_t;

// Immutable description of one unit of work.
struct TaskSpec {
  TaskId task_id = 0;
  TenantId tenant_id = 0;
  std::uint32_t priority = 0;
  TimeMs submit_time_ms = 0;
  TimeMs duration_ms = 0;  // > 0
  ResourceVector demand;   // at least one positive component

  bool operator==(const TaskSpec& o) const {
    return task_id == o.task_id && tenant_id == o.tenant_id &&
           priority == o.priority && submit_time_ms == o.submit_time_ms &&
           duration_ms == o.duration_ms && demand.cpu == o.demand.cpu &&
           demand.mem == o.demand.mem && demand.disk == o.demand.disk;
  }
};

enum class TaskPhase { kQueued, kRunning, kCompleted };

// Lifecycle of a task inside one simulation run. Execution is
// non-preemptive with fixed duration, so end = start + duration and the
// reported delay is pure queueing delay.
struct TaskRuntime {
  TaskSpec spec;
  TaskPhase phase = TaskPhase::kQueued;
  NodeId node = 0;           // valid when running or completed
  TimeMs start_time_ms = -1; // valid when running or completed
  TimeMs end_time_ms = -1;   // valid when completed

  TimeMs delay_ms() const { return start_time_ms - spec.submit_time_ms; }
};

}  // namespace tsched
