#define DOCTEST_CONFIG_IMPLEMENT
#include "doctest.h"

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "json.hpp"
#include "tenantsched/baselines.hpp"
#include "tenantsched/config.hpp"
#include "tenantsched/env.hpp"
#include "tenantsched/harness.hpp"
#include "tenantsched/mlp.hpp"
#include "tenantsched/ppo.hpp"
#include "tenantsched/report.hpp"
#include "tenantsched/rng.hpp"
#include "tenantsched/trace_io.hpp"

using namespace tsched;
using namespace tsched::harness;
using doctest::Contains;
using nlohmann::json;

namespace {

namespace fs = std::filesystem;

struct TempDir {
  fs::path path;

  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("tsched_harness_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string file(const std::string& name) const {
    return (path / name).string();
  }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(static_cast<bool>(in));
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

std::string write_config(const TempDir& dir, const json& j,
                         const std::string& name = "config.json") {
  const std::string path = dir.file(name);
  std::ofstream out(path, std::ios::binary);
  REQUIRE(static_cast<bool>(out));
  out << j.dump(2);
  return path;
}

json base_config(const std::string& out_dir) {
  json j;
  j["cluster"] = {{"node_count", 2},
                  {"capacity", {{"cpu", 8.0}, {"mem", 8.0}, {"disk", 8.0}}}};
  j["workload"] = {
      {"num_tenants", 2},
      {"phases",
       json::array(
           {{{"name", "low"}, {"rate_per_sec", 2.0}, {"duration_ms", 3000}}})},
      {"cpu", json::array({1.0, 3.0})},
      {"mem", json::array({1.0, 3.0})},
      {"disk", json::array({0.5, 1.5})},
      {"duration_ms", json::array({300.0, 900.0})},
  };
  j["out_dir"] = out_dir;
  return j;
}

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

TEST_CASE("minimal config loads with documented defaults") {
  TempDir dir;
  const std::string path = write_config(dir, base_config(dir.file("out")));
  const RunConfig cfg = load_config(path);

  REQUIRE(cfg.cluster.node_capacities.size() == 2);
  CHECK(cfg.cluster.node_capacities[0].cpu == 8.0);
  CHECK(cfg.cluster.node_capacities[1].disk == 8.0);
  REQUIRE(cfg.cluster.tenants.size() == 2);
  CHECK(cfg.cluster.tenants[1] == 1);

  REQUIRE(cfg.workload.has_value());
  CHECK(cfg.workload->num_tenants == 2);
  REQUIRE(cfg.workload->phases.size() == 1);
  CHECK(cfg.workload->phases[0].name == "low");
  CHECK(cfg.workload->phases[0].rate_per_sec == 2.0);
  CHECK(cfg.workload->duration_min_ms == 300);
  CHECK(cfg.workload->duration_max_ms == 900);
  CHECK(cfg.workload->priority_max == 9);
  CHECK(cfg.workload->seed == cfg.seed);

  CHECK(cfg.seed == 1);
  CHECK(cfg.ppo.seed == 1);
  CHECK(cfg.trace_path.empty());
  CHECK(cfg.weights.utilization == 1.0);
  CHECK(cfg.weights.delay == 1.0);
  CHECK(cfg.weights.fairness == 1.0);
  CHECK(cfg.mdp.queue_norm == 0.0);
  CHECK(cfg.mdp.window_ms == 10000);
  CHECK(cfg.schedulers == std::vector<std::string>{"fifo", "least_loaded",
                                                   "round_robin", "random",
                                                   "tenant_fair"});
  CHECK(cfg.seeds.empty());
  CHECK(cfg.episodes_per_seed == 1);
  CHECK(cfg.sweep_mode.empty());
  CHECK(cfg.jfi_window_ms == 10000);
}

TEST_CASE("config sections override every tunable") {
  TempDir dir;
  json j;
  j["seed"] = 9;
  j["cluster"] = {{"nodes", json::array({
                               {{"cpu", 4.0}, {"mem", 8.0}, {"disk", 2.0}},
                               {{"cpu", 16.0}},
                           })}};
  j["trace_path"] = "some/trace.csv";
  j["weights"] = {{"utilization", 2.0}, {"delay", 0.5}, {"fairness", 1.5}};
  j["mdp"] = {{"queue_norm", 7.0},
              {"d_ref_ms", 123.0},
              {"window_ms", 5000},
              {"max_priority", 5.0}};
  j["ppo"] = {{"gamma", 0.9},      {"lambda", 0.8},    {"eps_clip", 0.1},
              {"epochs_per_update", 2}, {"minibatch_size", 8},
              {"learning_rate", 0.001}, {"value_coef", 0.25},
              {"entropy_coef", 0.02},   {"horizon", 32},
              {"updates", 3},           {"max_grad_norm", 0.0},
              {"hidden_width", 8}};
  j["schedulers"] = json::array({"fifo", "random"});
  j["seeds"] = json::array({3, 4});
  j["out_dir"] = "results";
  j["checkpoint"] = "ck.txt";
  j["episodes_per_seed"] = 2;
  j["sweep"] = {{"mode", "fluctuation"},
                {"fluctuation",
                 {{"interval_ms", 500},
                  {"horizon_ms", 2000},
                  {"scale", json::array({0.5, 1.0})}}},
                {"jfi_window_ms", 250}};

  const RunConfig cfg = load_config(write_config(dir, j));
  REQUIRE(cfg.cluster.node_capacities.size() == 2);
  CHECK(cfg.cluster.node_capacities[0].mem == 8.0);
  CHECK(cfg.cluster.node_capacities[1].cpu == 16.0);
  CHECK(cfg.cluster.node_capacities[1].mem == 0.0);
  CHECK(cfg.trace_path == "some/trace.csv");
  CHECK(!cfg.workload.has_value());
  CHECK(cfg.cluster.tenants.empty());
  CHECK(cfg.weights.utilization == 2.0);
  CHECK(cfg.weights.delay == 0.5);
  CHECK(cfg.weights.fairness == 1.5);
  CHECK(cfg.mdp.queue_norm == 7.0);
  CHECK(cfg.mdp.d_ref_ms == 123.0);
  CHECK(cfg.mdp.window_ms == 5000);
  CHECK(cfg.mdp.max_priority == 5.0);
  CHECK(cfg.ppo.gamma == 0.9);
  CHECK(cfg.ppo.lambda == 0.8);
  CHECK(cfg.ppo.eps_clip == 0.1);
  CHECK(cfg.ppo.epochs_per_update == 2);
  CHECK(cfg.ppo.minibatch_size == 8);
  CHECK(cfg.ppo.learning_rate == 0.001);
  CHECK(cfg.ppo.value_coef == 0.25);
  CHECK(cfg.ppo.entropy_coef == 0.02);
  CHECK(cfg.ppo.horizon == 32);
  CHECK(cfg.ppo.updates == 3);
  CHECK(cfg.ppo.max_grad_norm == 0.0);
  CHECK(cfg.ppo.hidden_width == 8);
  CHECK(cfg.ppo.seed == 9);
  CHECK(cfg.schedulers == std::vector<std::string>{"fifo", "random"});
  CHECK(cfg.seeds == std::vector<std::uint64_t>{3, 4});
  CHECK(cfg.out_dir == "results");
  CHECK(cfg.checkpoint == "ck.txt");
  CHECK(cfg.episodes_per_seed == 2);
  CHECK(cfg.sweep_mode == "fluctuation");
  CHECK(cfg.fluctuation.interval_ms == 500);
  CHECK(cfg.fluctuation.horizon_ms == 2000);
  CHECK(cfg.fluctuation.scale_min == 0.5);
  CHECK(cfg.fluctuation.scale_max == 1.0);
  CHECK(cfg.jfi_window_ms == 250);
}

TEST_CASE("malformed configs are rejected with the offending field named") {
  TempDir dir;

  SUBCASE("missing file") {
    CHECK_THROWS_WITH_AS(load_config(dir.file("nope.json")),
                         Contains("cannot open"), std::runtime_error);
  }
  SUBCASE("invalid json") {
    const std::string path = dir.file("bad.json");
    std::ofstream(path) << "{not json";
    CHECK_THROWS_WITH_AS(load_config(path), Contains("not valid JSON"),
                         std::runtime_error);
  }
  SUBCASE("missing cluster") {
    json j = base_config("out");
    j.erase("cluster");
    CHECK_THROWS_WITH_AS(load_config(write_config(dir, j)),
                         Contains("cluster"), std::runtime_error);
  }
  SUBCASE("empty nodes array") {
    json j = base_config("out");
    j["cluster"] = {{"nodes", json::array()}};
    CHECK_THROWS_WITH_AS(load_config(write_config(dir, j)),
                         Contains("nonempty"), std::runtime_error);
  }
  SUBCASE("node_count below one") {
    json j = base_config("out");
    j["cluster"] = {{"node_count", 0},
                    {"capacity", {{"cpu", 1.0}, {"mem", 1.0}, {"disk", 1.0}}}};
    CHECK_THROWS_WITH_AS(load_config(write_config(dir, j)),
                         Contains("at least 1"), std::runtime_error);
  }
  SUBCASE("neither trace nor workload") {
    json j = base_config("out");
    j.erase("workload");
    CHECK_THROWS_WITH_AS(load_config(write_config(dir, j)),
                         Contains("trace_path or a workload"),
                         std::runtime_error);
  }
  SUBCASE("workload without phases") {
    json j = base_config("out");
    j["workload"].erase("phases");
    CHECK_THROWS_WITH_AS(load_config(write_config(dir, j)), Contains("phases"),
                         std::runtime_error);
  }
  SUBCASE("workload range not a pair") {
    json j = base_config("out");
    j["workload"]["cpu"] = json::array({1.0});
    CHECK_THROWS_WITH_AS(load_config(write_config(dir, j)),
                         Contains("[min, max]"), std::runtime_error);
  }
  SUBCASE("nonpositive mdp window") {
    json j = base_config("out");
    j["mdp"] = {{"window_ms", -5}};
    CHECK_THROWS_WITH_AS(load_config(write_config(dir, j)),
                         Contains("window_ms"), std::runtime_error);
  }
  SUBCASE("negative reward weight") {
    json j = base_config("out");
    j["weights"] = {{"delay", -1.0}};
    CHECK_THROWS(load_config(write_config(dir, j)));
  }
  SUBCASE("invalid ppo hyperparameter") {
    json j = base_config("out");
    j["ppo"] = {{"gamma", 1.5}};
    CHECK_THROWS(load_config(write_config(dir, j)));
  }
  SUBCASE("empty schedulers array") {
    json j = base_config("out");
    j["schedulers"] = json::array();
    CHECK_THROWS_WITH_AS(load_config(write_config(dir, j)),
                         Contains("nonempty"), std::runtime_error);
  }
  SUBCASE("empty seeds array") {
    json j = base_config("out");
    j["seeds"] = json::array();
    CHECK_THROWS_WITH_AS(load_config(write_config(dir, j)),
                         Contains("nonempty"), std::runtime_error);
  }
  SUBCASE("episodes_per_seed below one") {
    json j = base_config("out");
    j["episodes_per_seed"] = 0;
    CHECK_THROWS_WITH_AS(load_config(write_config(dir, j)),
                         Contains("episodes_per_seed"), std::runtime_error);
  }
  SUBCASE("all-zero node capacity") {
    json j = base_config("out");
    j["cluster"] = {{"node_count", 1},
                    {"capacity", {{"cpu", 0.0}, {"mem", 0.0}, {"disk", 0.0}}}};
    CHECK_THROWS_WITH_AS(load_config(write_config(dir, j)),
                         Contains("positive component"), std::runtime_error);
  }
  SUBCASE("nonpositive sweep window") {
    json j = base_config("out");
    j["sweep"] = {{"mode", "fluctuation"}, {"jfi_window_ms", 0}};
    CHECK_THROWS_WITH_AS(load_config(write_config(dir, j)),
                         Contains("jfi_window_ms"), std::runtime_error);
  }
}

TEST_CASE("command-line overrides collapse seeds and replace outputs") {
  TempDir dir;
  json j = base_config("out");
  j["seeds"] = json::array({5, 6});
  RunConfig cfg = load_config(write_config(dir, j));

  apply_overrides(cfg, std::nullopt, "", {});
  CHECK(cfg.seed == 1);
  CHECK(cfg.seeds == std::vector<std::uint64_t>{5, 6});
  CHECK(cfg.out_dir == "out");

  apply_overrides(cfg, 42, "alt", {"fifo"});
  CHECK(cfg.seed == 42);
  CHECK(cfg.ppo.seed == 42);
  REQUIRE(cfg.workload.has_value());
  CHECK(cfg.workload->seed == 42);
  CHECK(cfg.seeds.empty());
  CHECK(cfg.out_dir == "alt");
  CHECK(cfg.schedulers == std::vector<std::string>{"fifo"});
}

TEST_CASE("seed list and checkpoint path resolution") {
  RunConfig cfg;
  cfg.seed = 7;
  CHECK(effective_seeds(cfg) == std::vector<std::uint64_t>{7});
  cfg.seeds = {3, 4};
  CHECK(effective_seeds(cfg) == std::vector<std::uint64_t>{3, 4});

  cfg.out_dir = "runs";
  CHECK(checkpoint_path(cfg) == "runs/checkpoint.txt");
  cfg.checkpoint = "elsewhere/net.txt";
  CHECK(checkpoint_path(cfg) == "elsewhere/net.txt");
}

TEST_CASE("gen-trace writes a parseable deterministic trace file") {
  TempDir dir;
  json j = base_config(dir.file("out_a"));
  RunConfig cfg = load_config(write_config(dir, j));
  REQUIRE(cmd_gen_trace(cfg) == 0);

  const std::string path_a = dir.file("out_a") + "/trace.csv";
  const std::vector<TaskSpec> parsed = workload::parse_trace_file(path_a);
  const std::vector<TaskSpec> expected = workload::generate_workload(*cfg.workload);
  REQUIRE(parsed.size() == expected.size());
  for (std::size_t i = 0; i < parsed.size(); ++i) {
    CHECK(parsed[i] == expected[i]);
  }

  cfg.out_dir = dir.file("out_b");
  REQUIRE(cmd_gen_trace(cfg) == 0);
  CHECK(read_file(path_a) == read_file(dir.file("out_b") + "/trace.csv"));

  cfg.workload->phases[0].rate_per_sec = 0.0;
  cfg.out_dir = dir.file("out_c");
  REQUIRE(cmd_gen_trace(cfg) == 0);
  const auto empty_lines = lines_of(read_file(dir.file("out_c") + "/trace.csv"));
  REQUIRE(empty_lines.size() == 1);
  CHECK(empty_lines[0] == workload::kTraceHeader);

  RunConfig no_workload;
  no_workload.trace_path = path_a;
  CHECK_THROWS_WITH_AS(cmd_gen_trace(no_workload), Contains("workload"),
                       std::runtime_error);
}

namespace {

json small_train_config(const std::string& out_dir) {
  json j = base_config(out_dir);
  j["ppo"] = {{"updates", 2},     {"horizon", 32},  {"minibatch_size", 16},
              {"epochs_per_update", 2}, {"hidden_width", 8}};
  return j;
}

}  // namespace

TEST_CASE("train command writes curve, checkpoint, and report, and reruns byte-identically") {
  TempDir dir;
  const std::string cfg_path =
      write_config(dir, small_train_config(dir.file("run_a")));
  RunConfig cfg = load_config(cfg_path);
  REQUIRE(cmd_train(cfg, cfg_path) == 0);

  const std::string curve_a = dir.file("run_a") + "/curve.csv";
  const auto curve_lines = lines_of(read_file(curve_a));
  REQUIRE(curve_lines.size() == 3);
  CHECK(curve_lines[0] == "update,mean_reward,policy_loss,value_loss,entropy");
  CHECK(curve_lines[1].substr(0, 2) == "1,");
  CHECK(curve_lines[2].substr(0, 2) == "2,");

  const std::string ckpt_a = dir.file("run_a") + "/checkpoint.txt";
  CHECK(fs::exists(ckpt_a));
  CHECK_NOTHROW(policy::load_checkpoint_file(ckpt_a));

  const json report = json::parse(read_file(dir.file("run_a") + "/train_report.json"));
  CHECK(report["schema_version"] == 1);
  CHECK(report["command"] == "train");
  CHECK(report["config_path"] == cfg_path);
  CHECK(report["seeds"] == json::array({1}));
  CHECK(report["wall_clock_ms"].is_number_integer());

  cfg.out_dir = dir.file("run_b");
  cfg.checkpoint.clear();
  REQUIRE(cmd_train(cfg, cfg_path) == 0);
  CHECK(read_file(curve_a) == read_file(dir.file("run_b") + "/curve.csv"));
  CHECK(read_file(ckpt_a) == read_file(dir.file("run_b") + "/checkpoint.txt"));

  cfg.schedulers = {"rl", "fifo"};
  cfg.checkpoint = ckpt_a;
  cfg.out_dir = dir.file("run_c");
  REQUIRE(cmd_compare(cfg, cfg_path) == 0);
  const auto rows = lines_of(read_file(dir.file("run_c") + "/compare.csv"));
  REQUIRE(rows.size() == 3);
  CHECK(rows[1].substr(0, 3) == "rl,");
  CHECK(rows[2].substr(0, 5) == "fifo,");
}

TEST_CASE("compare command reports every scheduler and cross-checks evaluation") {
  TempDir dir;
  json j = base_config(dir.file("cmp_a"));
  j["schedulers"] = json::array({"fifo", "random"});
  j["seeds"] = json::array({1, 2});
  const std::string cfg_path = write_config(dir, j);
  RunConfig cfg = load_config(cfg_path);
  REQUIRE(cmd_compare(cfg, cfg_path) == 0);

  const std::string csv_a = dir.file("cmp_a") + "/compare.csv";
  const auto rows = lines_of(read_file(csv_a));
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] ==
        "scheduler,avg_delay_ms_mean,avg_delay_ms_std,utilization_pct_mean,"
        "utilization_pct_std,jfi_mean,jfi_std,mean_reward_mean,"
        "mean_reward_std,completed_mean");
  CHECK(rows[1].substr(0, 5) == "fifo,");
  CHECK(rows[2].substr(0, 7) == "random,");

  const json report = json::parse(read_file(dir.file("cmp_a") + "/compare_report.json"));
  CHECK(report["schema_version"] == 1);
  CHECK(report["command"] == "compare");
  CHECK(report["seeds"] == json::array({1, 2}));
  REQUIRE(report["results"].size() == 2);
  CHECK(report["results"][0]["scheduler"] == "fifo");
  CHECK(report["results"][1]["scheduler"] == "random");
  CHECK(report["results"][0]["jfi"]["mean"].is_number());
  CHECK(report["results"][0]["avg_delay_ms"]["std"].is_number());
  CHECK(report["results"][0]["completed"].is_number());

  cfg.out_dir = dir.file("cmp_b");
  REQUIRE(cmd_compare(cfg, cfg_path) == 0);
  CHECK(read_file(csv_a) == read_file(dir.file("cmp_b") + "/compare.csv"));

  const std::vector<TaskSpec> trace = resolve_trace(cfg);
  mdp::EnvConfig ec;
  ec.cluster = cfg.cluster;
  ec.trace = trace;
  ec.mdp = cfg.mdp;
  ec.weights = cfg.weights;
  mdp::SchedulingEnv env(ec);
  std::vector<double> delays, utils, jfis, rewards, completed;
  for (std::uint64_t seed : {1, 2}) {
    baselines::RandomFit policy;
    Rng rng(Rng::derive(seed, fnv1a64("random")));
    const ppo::EvalResult ev = ppo::evaluate_policy(env, policy, 1, rng);
    delays.push_back(ev.mean_delay_ms);
    utils.push_back(100.0 * ev.mean_utilization);
    jfis.push_back(ev.mean_jfi);
    rewards.push_back(ev.mean_episode_reward);
    completed.push_back(ev.mean_completed);
  }
  std::string expected = "random";
  for (const auto& stat : {mean_std(delays), mean_std(utils), mean_std(jfis),
                           mean_std(rewards)}) {
    expected += "," + fixed6(stat.first) + "," + fixed6(stat.second);
  }
  expected += "," + fixed6(mean_std(completed).first);
  CHECK(rows[2] == expected);
}

TEST_CASE("load-phase sweep writes one row per condition and scheduler") {
  TempDir dir;
  json j = base_config(dir.file("sweep"));
  j["workload"]["phases"] = json::array(
      {{{"name", "low"}, {"rate_per_sec", 0.5}, {"duration_ms", 2000}},
       {{"name", "high"}, {"rate_per_sec", 3.0}, {"duration_ms", 2000}}});
  j["schedulers"] = json::array({"fifo", "least_loaded"});
  j["sweep"] = {{"mode", "load_phases"}};
  const std::string cfg_path = write_config(dir, j);
  const RunConfig cfg = load_config(cfg_path);
  REQUIRE(cmd_sweep(cfg, cfg_path) == 0);

  const auto rows = lines_of(read_file(dir.file("sweep") + "/sweep_load_phases.csv"));
  REQUIRE(rows.size() == 5);
  CHECK(rows[0] ==
        "condition,scheduler,avg_delay_ms_mean,avg_delay_ms_std,"
        "utilization_pct_mean,utilization_pct_std,jfi_mean,jfi_std,"
        "mean_reward_mean,mean_reward_std,completed_mean");
  CHECK(rows[1].substr(0, 9) == "low,fifo,");
  CHECK(rows[2].substr(0, 17) == "low,least_loaded,");
  CHECK(rows[3].substr(0, 10) == "high,fifo,");
  CHECK(rows[4].substr(0, 18) == "high,least_loaded,");

  for (const char* chart :
       {"/sweep_load_phases_jfi.svg", "/sweep_load_phases_delay.svg"}) {
    const std::string svg = read_file(dir.file("sweep") + chart);
    std::size_t polylines = 0;
    for (std::size_t at = svg.find("<polyline"); at != std::string::npos;
         at = svg.find("<polyline", at + 1)) {
      ++polylines;
    }
    CHECK(polylines == 2);
  }

  const json report = json::parse(read_file(dir.file("sweep") + "/sweep_report.json"));
  CHECK(report["command"] == "sweep");
  REQUIRE(report["results"].size() == 4);
  CHECK(report["results"][0]["scheduler"] == "low:fifo");
  CHECK(report["results"][3]["scheduler"] == "high:least_loaded");

  RunConfig bad = cfg;
  bad.sweep_mode = "bogus";
  CHECK_THROWS_WITH_AS(cmd_sweep(bad, cfg_path), Contains("load_phases"),
                       std::runtime_error);
}

TEST_CASE("degenerate fluctuation sweep matches the series without capacity events") {
  TempDir dir;
  json j = base_config(dir.file("fluct"));
  j["workload"]["phases"] =
      json::array({{{"name", "med"}, {"rate_per_sec", 2.0}, {"duration_ms", 4000}}});
  j["schedulers"] = json::array({"fifo"});
  j["sweep"] = {{"mode", "fluctuation"},
                {"fluctuation",
                 {{"interval_ms", 500},
                  {"horizon_ms", 3000},
                  {"scale", json::array({1.0, 1.0})}}},
                {"jfi_window_ms", 1000}};
  const std::string cfg_path = write_config(dir, j);
  const RunConfig cfg = load_config(cfg_path);
  REQUIRE(cmd_sweep(cfg, cfg_path) == 0);

  mdp::EnvConfig ec;
  ec.cluster = cfg.cluster;
  ec.trace = resolve_trace(cfg);
  ec.mdp = cfg.mdp;
  ec.weights = cfg.weights;
  mdp::SchedulingEnv env(ec);
  baselines::FifoFirstFit fifo;
  Rng rng(999);
  const std::vector<double> control =
      jfi_window_series(env, fifo, rng, cfg.jfi_window_ms);

  const auto rows = lines_of(read_file(dir.file("fluct") + "/jfi_series_fifo.csv"));
  REQUIRE(rows.size() == control.size() + 1);
  CHECK(rows[0] == "window_end_ms,jfi_mean,jfi_std");
  for (std::size_t i = 0; i < control.size(); ++i) {
    const std::string expected = std::to_string((i + 1) * 1000) + "," +
                                 fixed6(control[i]) + ",0.000000";
    CHECK(rows[i + 1] == expected);
  }

  const std::string svg = read_file(dir.file("fluct") + "/sweep_fluctuation_jfi.svg");
  CHECK(svg.find("<polyline") != std::string::npos);
  CHECK(svg.find("fifo") != std::string::npos);
}

TEST_CASE("rl scheduler without a checkpoint names the missing file") {
  TempDir dir;
  json j = base_config(dir.file("rl_missing"));
  j["schedulers"] = json::array({"rl"});
  const std::string cfg_path = write_config(dir, j);
  const RunConfig cfg = load_config(cfg_path);
  CHECK_THROWS_WITH_AS(cmd_compare(cfg, cfg_path),
                       Contains("run the train command first"),
                       std::runtime_error);
  try {
    cmd_compare(cfg, cfg_path);
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find(checkpoint_path(cfg)) != std::string::npos);
  }
}

TEST_CASE("report files carry the full result schema") {
  TempDir dir;
  RunReport report;
  report.command = "eval";
  report.config_path = "cfg.json";
  report.seeds = {11, 12};
  SchedulerResult row;
  row.scheduler = "fifo";
  row.avg_delay_ms_mean = 12.5;
  row.avg_delay_ms_std = 0.25;
  row.utilization_pct_mean = 61.0;
  row.jfi_mean = 0.875;
  row.mean_reward_mean = -0.5;
  row.completed_mean = 42.0;
  report.results = {row};
  report.wall_clock_ms = 1234;

  const std::string path = dir.file("report.json");
  write_report_file(report, path);
  const std::string text = read_file(path);
  CHECK(text.back() == '\n');
  const json parsed = json::parse(text);
  CHECK(parsed["schema_version"] == 1);
  CHECK(parsed["command"] == "eval");
  CHECK(parsed["config_path"] == "cfg.json");
  CHECK(parsed["seeds"] == json::array({11, 12}));
  CHECK(parsed["wall_clock_ms"] == 1234);
  REQUIRE(parsed["results"].size() == 1);
  const json& r = parsed["results"][0];
  CHECK(r["scheduler"] == "fifo");
  CHECK(r["avg_delay_ms"]["mean"] == 12.5);
  CHECK(r["avg_delay_ms"]["std"] == 0.25);
  CHECK(r["utilization_pct"]["mean"] == 61.0);
  CHECK(r["jfi"]["mean"] == 0.875);
  CHECK(r["mean_reward"]["mean"] == -0.5);
  CHECK(r["completed"] == 42.0);
}

TEST_CASE("mean and population deviation") {
  const auto [mean, sd] = mean_std({2.0, 4.0});
  CHECK(mean == 3.0);
  CHECK(sd == 1.0);
  CHECK(mean_std({5.0}).second == 0.0);
  CHECK_THROWS_AS(mean_std({}), std::invalid_argument);
}

TEST_CASE("fairness series samples once per window boundary") {
  mdp::EnvConfig ec;
  ec.cluster.node_capacities = {{10.0, 10.0, 10.0}};
  ec.cluster.tenants = {0};
  TaskSpec task;
  task.task_id = 0;
  task.tenant_id = 0;
  task.submit_time_ms = 0;
  task.duration_ms = 2500;
  task.demand = {2.0, 2.0, 2.0};
  ec.trace = {task};
  mdp::SchedulingEnv env(ec);
  baselines::FifoFirstFit fifo;
  Rng rng(1);

  const std::vector<double> series = jfi_window_series(env, fifo, rng, 1000);
  REQUIRE(series.size() == 3);
  for (double v : series) CHECK(v == 1.0);
  CHECK(env.state().clock() == 2500);

  mdp::EnvConfig empty = ec;
  empty.trace.clear();
  mdp::SchedulingEnv idle(empty);
  const std::vector<double> none = jfi_window_series(idle, fifo, rng, 1000);
  REQUIRE(none.size() == 1);
  CHECK(none[0] == 1.0);
}

TEST_CASE("final fairness sample equals the end-of-episode share index") {
  mdp::EnvConfig ec;
  ec.cluster.node_capacities = {{10.0, 10.0, 10.0}};
  ec.cluster.tenants = {0, 1};
  TaskSpec a;
  a.task_id = 0;
  a.tenant_id = 0;
  a.submit_time_ms = 0;
  a.duration_ms = 1500;
  a.demand = {4.0, 1.0, 1.0};
  TaskSpec b = a;
  b.task_id = 1;
  b.tenant_id = 1;
  b.demand = {1.0, 1.0, 1.0};
  ec.trace = {a, b};
  mdp::SchedulingEnv env(ec);
  baselines::FifoFirstFit fifo;
  Rng rng(1);

  const std::vector<double> series = jfi_window_series(env, fifo, rng, 400);
  REQUIRE(!series.empty());
  CHECK(series.back() ==
        doctest::Approx(mdp::jain_index(env.state().tenant_share_integrals()))
            .epsilon(1e-12));
}

TEST_CASE("comparison table prints one line per scheduler") {
  SchedulerResult a;
  a.scheduler = "fifo";
  a.avg_delay_ms_mean = 10.0;
  SchedulerResult b;
  b.scheduler = "random";
  b.jfi_mean = 0.9;
  const std::string table = compare_table_text({a, b});
  const auto rows = lines_of(table);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].find("scheduler") != std::string::npos);
  CHECK(rows[0].find("avg_delay_ms") != std::string::npos);
  CHECK(rows[1].find("fifo") != std::string::npos);
  CHECK(rows[2].find("random") != std::string::npos);
}

int main(int argc, char** argv) {
  ::setenv("TENANTSCHED_LOG", "quiet", 1);
  return doctest::Context(argc, argv).run();
}
