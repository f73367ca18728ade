#include "tenantsched/trace_io.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "tenantsched/text.hpp"

namespace tsched::workload {

namespace {

constexpr int kColumns = 9;

double require_nonneg_real(std::string_view field, int line, const char* name) {
  auto v = parse_double(trim(field));
  if (!v) {
    throw TraceParseError(line, std::string("non-numeric ") + name + " field '" +
                                    std::string(field) + "'");
  }
  if (*v < 0.0) {
    throw TraceParseError(line, std::string(name) + " must be nonnegative");
  }
  return *v;
}

std::int64_t require_int(std::string_view field, int line, const char* name) {
  auto v = parse_int(trim(field));
  if (!v) {
    throw TraceParseError(line, std::string("non-numeric ") + name + " field '" +
                                    std::string(field) + "'");
  }
  return *v;
}

}  // namespace

std::vector<TaskSpec> parse_trace(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw TraceParseError(1, "missing header");
  }
  if (trim(line) != kTraceHeader) {
    throw TraceParseError(1, "unexpected header '" + std::string(trim(line)) +
                                 "'");
  }

  std::vector<TaskSpec> tasks;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view content = trim(line);
    if (content.empty()) continue;
    auto fields = split(content, ',');
    if (static_cast<int>(fields.size()) != kColumns) {
      throw TraceParseError(line_no,
                            "expected " + std::to_string(kColumns) +
                                " columns, got " + std::to_string(fields.size()));
    }

    TaskSpec t;
    auto id = parse_uint(trim(fields[0]));
    if (!id) throw TraceParseError(line_no, "non-numeric task_id field");
    t.task_id = *id;
    auto tenant = parse_uint(trim(fields[1]));
    if (!tenant) throw TraceParseError(line_no, "non-numeric tenant_id field");
    t.tenant_id = *tenant;
    std::int64_t priority = require_int(fields[2], line_no, "priority");
    if (priority < 0) throw TraceParseError(line_no, "priority must be nonnegative");
    t.priority = static_cast<std::uint32_t>(priority);

    std::int64_t submit = require_int(fields[3], line_no, "submit_time_ms");
    std::int64_t start = require_int(fields[4], line_no, "start_time_ms");
    std::int64_t end = require_int(fields[5], line_no, "end_time_ms");
    if (submit < 0) throw TraceParseError(line_no, "submit_time_ms must be nonnegative");
    if (start < submit) {
      throw TraceParseError(line_no, "start_time_ms precedes submit_time_ms");
    }
    if (end <= start) {
      throw TraceParseError(line_no, "end_time_ms must exceed start_time_ms");
    }
    t.submit_time_ms = submit;
    t.duration_ms = end - start;

    t.demand.cpu = require_nonneg_real(fields[6], line_no, "cpu");
    t.demand.mem = require_nonneg_real(fields[7], line_no, "mem");
    t.demand.disk = require_nonneg_real(fields[8], line_no, "disk");
    if (!t.demand.any_positive()) {
      throw TraceParseError(line_no, "demand must have a positive component");
    }
    tasks.push_back(t);
  }

  std::stable_sort(tasks.begin(), tasks.end(),
                   [](const TaskSpec& a, const TaskSpec& b) {
                     return a.submit_time_ms < b.submit_time_ms;
                   });
  return tasks;
}

std::vector<TaskSpec> parse_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open trace file '" + path + "'");
  }
  return parse_trace(in);
}

void serialize_trace(const std::vector<TaskSpec>& tasks, std::ostream& out) {
  out << kTraceHeader << "\n";
  for (const TaskSpec& t : tasks) {
    out << t.task_id << ',' << t.tenant_id << ',' << t.priority << ','
        << t.submit_time_ms << ',' << t.submit_time_ms << ','
        << (t.submit_time_ms + t.duration_ms) << ',' << format_double(t.demand.cpu)
        << ',' << format_double(t.demand.mem) << ','
        << format_double(t.demand.disk) << "\n";
  }
}

void write_trace_file(const std::vector<TaskSpec>& tasks,
                      const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write trace file '" + path + "'");
  }
  serialize_trace(tasks, out);
  if (!out.flush()) {
    throw std::runtime_error("failed writing trace file '" + path + "'");
  }
}

}  // namespace tsched::workload
