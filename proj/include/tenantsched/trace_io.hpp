#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "tenantsched/task.hpp"

namespace tsched::workload {

inline constexpr const char* kTraceHeader =
    "task_id,tenant_id,priority,submit_time_ms,start_time_ms,end_time_ms,cpu,"
    "mem,disk";

class TraceParseError : public std::runtime_error {
 public:
  TraceParseError(int line, const std::string& what)
      : std::runtime_error("trace line " + std::to_string(line) + ": " + what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Parses the comma-separated trace format (header required). Duration is
// derived as end - start; output is sorted by submit time.
std::vector<TaskSpec> parse_trace(std::istream& in);

std::vector<TaskSpec> parse_trace_file(const std::string& path);

// Emits the same format. Synthetic specs carry no observed start/end, so
// those columns are filled with submit and submit + duration.
void serialize_trace(const std::vector<TaskSpec>& tasks, std::ostream& out);

void write_trace_file(const std::vector<TaskSpec>& tasks,
                      const std::string& path);

}  // namespace tsched::workload
