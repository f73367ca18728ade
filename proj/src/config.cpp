#include "tenantsched/config.hpp"

#include <fstream>
#include <set>
#include <stdexcept>

#include "json.hpp"
#include "tenantsched/trace_io.hpp"

namespace tsched::harness {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& what) {
  throw std::runtime_error("config: " + what);
}

double num_or(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) fail(std::string(key) + " must be a number");
  return j[key].get<double>();
}

std::int64_t int_or(const json& j, const char* key, std::int64_t fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number_integer()) fail(std::string(key) + " must be an integer");
  return j[key].get<std::int64_t>();
}

std::pair<double, double> range_of(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array() || j[key].size() != 2) {
    fail(std::string(key) + " must be a [min, max] pair");
  }
  return {j[key][0].get<double>(), j[key][1].get<double>()};
}

ResourceVector resource_of(const json& j, const std::string& where) {
  if (!j.is_object()) fail(where + " must be an object with cpu/mem/disk");
  ResourceVector r;
  r.cpu = num_or(j, "cpu", 0.0);
  r.mem = num_or(j, "mem", 0.0);
  r.disk = num_or(j, "disk", 0.0);
  return r;
}

void parse_cluster(const json& j, RunConfig& cfg) {
  if (!j.contains("cluster")) fail("missing cluster section");
  const json& c = j["cluster"];
  if (c.contains("nodes")) {
    if (!c["nodes"].is_array() || c["nodes"].empty()) {
      fail("cluster.nodes must be a nonempty array");
    }
    for (const json& n : c["nodes"]) {
      cfg.cluster.node_capacities.push_back(resource_of(n, "cluster node"));
    }
  } else if (c.contains("node_count") && c.contains("capacity")) {
    const std::int64_t count = int_or(c, "node_count", 0);
    if (count < 1) fail("cluster.node_count must be at least 1");
    const ResourceVector cap = resource_of(c["capacity"], "cluster.capacity");
    cfg.cluster.node_capacities.assign(static_cast<std::size_t>(count), cap);
  } else {
    fail("cluster needs either nodes[] or node_count + capacity");
  }
}

void parse_workload(const json& w, RunConfig& cfg) {
  workload::WorkloadConfig wc;
  wc.num_tenants =
      static_cast<std::uint32_t>(int_or(w, "num_tenants", 1));
  if (!w.contains("phases") || !w["phases"].is_array() || w["phases"].empty()) {
    fail("workload.phases must be a nonempty array");
  }
  for (const json& p : w["phases"]) {
    workload::LoadPhase phase;
    if (!p.contains("name") || !p["name"].is_string()) {
      fail("workload phase needs a name");
    }
    phase.name = p["name"].get<std::string>();
    phase.rate_per_sec = num_or(p, "rate_per_sec", 0.0);
    phase.duration_ms = int_or(p, "duration_ms", 0);
    wc.phases.push_back(phase);
  }
  std::tie(wc.cpu_min, wc.cpu_max) = range_of(w, "cpu");
  std::tie(wc.mem_min, wc.mem_max) = range_of(w, "mem");
  std::tie(wc.disk_min, wc.disk_max) = range_of(w, "disk");
  const auto dur = range_of(w, "duration_ms");
  wc.duration_min_ms = static_cast<TimeMs>(dur.first);
  wc.duration_max_ms = static_cast<TimeMs>(dur.second);
  if (w.contains("priority")) {
    const auto pr = range_of(w, "priority");
    wc.priority_min = static_cast<std::uint32_t>(pr.first);
    wc.priority_max = static_cast<std::uint32_t>(pr.second);
  }
  wc.seed = cfg.seed;
  if (w.contains("seed")) {
    wc.seed = static_cast<std::uint64_t>(int_or(w, "seed", 0));
  }
  cfg.workload = wc;
}

}  // namespace

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    fail("'" + path + "' is not valid JSON: " + e.what());
  }

  RunConfig cfg;
  cfg.seed = static_cast<std::uint64_t>(int_or(j, "seed", 1));
  parse_cluster(j, cfg);

  if (j.contains("trace_path")) {
    cfg.trace_path = j["trace_path"].get<std::string>();
  }
  if (j.contains("workload")) parse_workload(j["workload"], cfg);
  if (cfg.trace_path.empty() && !cfg.workload.has_value()) {
    fail("either trace_path or a workload section is required");
  }

  if (j.contains("weights")) {
    const json& w = j["weights"];
    cfg.weights.utilization = num_or(w, "utilization", 1.0);
    cfg.weights.delay = num_or(w, "delay", 1.0);
    cfg.weights.fairness = num_or(w, "fairness", 1.0);
    mdp::validate_weights(cfg.weights);
  }

  if (j.contains("mdp")) {
    const json& m = j["mdp"];
    cfg.mdp.queue_norm = num_or(m, "queue_norm", 0.0);
    cfg.mdp.d_ref_ms = num_or(m, "d_ref_ms", 0.0);
    cfg.mdp.window_ms = int_or(m, "window_ms", 10000);
    cfg.mdp.max_priority = num_or(m, "max_priority", 0.0);
    if (cfg.mdp.window_ms <= 0) fail("mdp.window_ms must be positive");
  }

  if (j.contains("ppo")) {
    const json& p = j["ppo"];
    ppo::PPOHyper h;
    h.gamma = num_or(p, "gamma", h.gamma);
    h.lambda = num_or(p, "lambda", h.lambda);
    h.eps_clip = num_or(p, "eps_clip", h.eps_clip);
    h.epochs_per_update =
        static_cast<int>(int_or(p, "epochs_per_update", h.epochs_per_update));
    h.minibatch_size =
        static_cast<int>(int_or(p, "minibatch_size", h.minibatch_size));
    h.learning_rate = num_or(p, "learning_rate", h.learning_rate);
    h.value_coef = num_or(p, "value_coef", h.value_coef);
    h.entropy_coef = num_or(p, "entropy_coef", h.entropy_coef);
    h.horizon = static_cast<int>(int_or(p, "horizon", h.horizon));
    h.updates = static_cast<int>(int_or(p, "updates", h.updates));
    h.max_grad_norm = num_or(p, "max_grad_norm", h.max_grad_norm);
    h.hidden_width =
        static_cast<std::size_t>(int_or(p, "hidden_width",
                                        static_cast<std::int64_t>(h.hidden_width)));
    cfg.ppo = h;
  }
  cfg.ppo.seed = cfg.seed;
  ppo::validate(cfg.ppo);

  if (j.contains("schedulers")) {
    if (!j["schedulers"].is_array() || j["schedulers"].empty()) {
      fail("schedulers must be a nonempty array of names");
    }
    cfg.schedulers.clear();
    for (const json& s : j["schedulers"]) {
      cfg.schedulers.push_back(s.get<std::string>());
    }
  }

  if (j.contains("seeds")) {
    if (!j["seeds"].is_array() || j["seeds"].empty()) {
      fail("seeds must be a nonempty array");
    }
    for (const json& s : j["seeds"]) {
      cfg.seeds.push_back(s.get<std::uint64_t>());
    }
  }

  if (j.contains("out_dir")) cfg.out_dir = j["out_dir"].get<std::string>();
  if (j.contains("checkpoint")) {
    cfg.checkpoint = j["checkpoint"].get<std::string>();
  }
  cfg.episodes_per_seed =
      static_cast<int>(int_or(j, "episodes_per_seed", 1));
  if (cfg.episodes_per_seed < 1) fail("episodes_per_seed must be at least 1");

  if (j.contains("sweep")) {
    const json& s = j["sweep"];
    cfg.sweep_mode = s.contains("mode") ? s["mode"].get<std::string>() : "";
    if (s.contains("fluctuation")) {
      const json& f = s["fluctuation"];
      cfg.fluctuation.interval_ms = int_or(f, "interval_ms", 10000);
      cfg.fluctuation.horizon_ms = int_or(f, "horizon_ms", 0);
      if (f.contains("scale")) {
        const auto sc = range_of(f, "scale");
        cfg.fluctuation.scale_min = sc.first;
        cfg.fluctuation.scale_max = sc.second;
      }
    }
    cfg.jfi_window_ms = int_or(s, "jfi_window_ms", 10000);
    if (cfg.jfi_window_ms <= 0) fail("sweep.jfi_window_ms must be positive");
  }

  for (const ResourceVector& cap : cfg.cluster.node_capacities) {
    if (!cap.nonnegative() || !cap.any_positive()) {
      fail("node capacities must be nonnegative with a positive component");
    }
  }
  if (cfg.workload.has_value()) {
    for (std::uint32_t t = 0; t < cfg.workload->num_tenants; ++t) {
      cfg.cluster.tenants.push_back(t);
    }
  }
  return cfg;
}

void apply_overrides(RunConfig& config, std::optional<std::uint64_t> seed,
                     const std::string& out_dir,
                     const std::vector<std::string>& schedulers) {
  if (seed.has_value()) {
    config.seed = *seed;
    config.ppo.seed = *seed;
    if (config.workload.has_value()) config.workload->seed = *seed;
    config.seeds.clear();
  }
  if (!out_dir.empty()) config.out_dir = out_dir;
  if (!schedulers.empty()) config.schedulers = schedulers;
}

std::vector<TaskSpec> resolve_trace(const RunConfig& config) {
  if (!config.trace_path.empty()) {
    return workload::parse_trace_file(config.trace_path);
  }
  return workload::generate_workload(*config.workload);
}

std::vector<std::uint64_t> effective_seeds(const RunConfig& config) {
  if (!config.seeds.empty()) return config.seeds;
  return {config.seed};
}

std::string checkpoint_path(const RunConfig& config) {
  if (!config.checkpoint.empty()) return config.checkpoint;
  return config.out_dir + "/checkpoint.txt";
}

}  // namespace tsched::harness
