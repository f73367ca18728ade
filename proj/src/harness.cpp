#include "tenantsched/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "tenantsched/baselines.hpp"
#include "tenantsched/env.hpp"
#include "tenantsched/fairness.hpp"
#include "tenantsched/log.hpp"
#include "tenantsched/ppo.hpp"
#include "tenantsched/svg.hpp"
#include "tenantsched/trace_io.hpp"

namespace tsched::harness {

namespace {

namespace fs = std::filesystem;

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

class Stopwatch {
 public:
  std::int64_t elapsed_ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ =
      std::chrono::steady_clock::now();
};

mdp::EnvConfig build_env_config(const RunConfig& cfg,
                                std::vector<TaskSpec> trace,
                                std::vector<sim::SimEvent> events) {
  mdp::EnvConfig ec;
  ec.cluster = cfg.cluster;
  ec.trace = std::move(trace);
  ec.capacity_events = std::move(events);
  ec.mdp = cfg.mdp;
  ec.weights = cfg.weights;
  return ec;
}

std::unique_ptr<baselines::SchedulerPolicy> build_policy(
    const std::string& name, const RunConfig& cfg,
    const mdp::MdpConfig& resolved_mdp) {
  if (name == "rl") {
    const std::string path = checkpoint_path(cfg);
    if (!fs::exists(path)) {
      throw std::runtime_error("scheduler 'rl' needs checkpoint '" + path +
                               "'; run the train command first");
    }
    return std::make_unique<ppo::RlPolicy>(policy::load_checkpoint_file(path),
                                           resolved_mdp, true);
  }
  return baselines::make_scheduler(name);
}

double cumulative_jfi(const sim::ClusterState& state) {
  const std::vector<double>& shares = state.tenant_share_integrals();
  if (shares.empty()) return 1.0;
  return mdp::jain_index(shares);
}

void ensure_out_dir(const RunConfig& cfg) {
  if (!cfg.out_dir.empty()) fs::create_directories(cfg.out_dir);
}

std::string out_path(const RunConfig& cfg, const std::string& file) {
  if (cfg.out_dir.empty()) return file;
  return cfg.out_dir + "/" + file;
}

}  // namespace

std::vector<SchedulerResult> run_comparison(
    const RunConfig& cfg, const std::vector<TaskSpec>& trace,
    const std::vector<sim::SimEvent>& capacity_events,
    const std::vector<std::string>& schedulers) {
  mdp::SchedulingEnv env(build_env_config(cfg, trace, capacity_events));
  const std::vector<std::uint64_t> seeds = effective_seeds(cfg);

  std::vector<SchedulerResult> rows;
  for (const std::string& name : schedulers) {
    std::unique_ptr<baselines::SchedulerPolicy> policy =
        build_policy(name, cfg, env.mdp_config());
    std::vector<double> delays, utils, jfis, rewards, completed;
    for (std::uint64_t seed : seeds) {
      Rng rng(Rng::derive(seed, fnv1a64(name)));
      const ppo::EvalResult ev =
          ppo::evaluate_policy(env, *policy, cfg.episodes_per_seed, rng);
      delays.push_back(ev.mean_delay_ms);
      utils.push_back(100.0 * ev.mean_utilization);
      jfis.push_back(ev.mean_jfi);
      rewards.push_back(ev.mean_episode_reward);
      completed.push_back(ev.mean_completed);
    }
    SchedulerResult row;
    row.scheduler = name;
    std::tie(row.avg_delay_ms_mean, row.avg_delay_ms_std) = mean_std(delays);
    std::tie(row.utilization_pct_mean, row.utilization_pct_std) =
        mean_std(utils);
    std::tie(row.jfi_mean, row.jfi_std) = mean_std(jfis);
    std::tie(row.mean_reward_mean, row.mean_reward_std) = mean_std(rewards);
    row.completed_mean = mean_std(completed).first;
    rows.push_back(row);
    log_debug("evaluated scheduler " + name);
  }
  return rows;
}

int cmd_gen_trace(const RunConfig& cfg) {
  if (!cfg.workload.has_value()) {
    throw std::runtime_error("gen-trace needs a workload section in the config");
  }
  ensure_out_dir(cfg);
  const std::vector<TaskSpec> trace = workload::generate_workload(*cfg.workload);
  const std::string path = out_path(cfg, "trace.csv");
  workload::write_trace_file(trace, path);
  log_info("wrote " + std::to_string(trace.size()) + " tasks to " + path);
  return 0;
}

int cmd_train(const RunConfig& cfg, const std::string& config_path) {
  Stopwatch timer;
  ensure_out_dir(cfg);
  const std::vector<TaskSpec> trace = resolve_trace(cfg);

  ppo::EnvFactory factory = [&cfg, &trace]() {
    return std::make_unique<mdp::SchedulingEnv>(
        build_env_config(cfg, trace, {}));
  };
  const ppo::TrainResult result =
      ppo::train(factory, cfg.ppo, [&cfg](const ppo::CurvePoint& pt) {
        std::ostringstream line;
        line << "update " << pt.update << "/" << cfg.ppo.updates
             << " mean_reward=" << fixed6(pt.mean_reward)
             << " policy_loss=" << fixed6(pt.policy_loss)
             << " value_loss=" << fixed6(pt.value_loss)
             << " entropy=" << fixed6(pt.entropy);
        log_info(line.str());
      });

  const std::string ckpt = checkpoint_path(cfg);
  policy::save_checkpoint_file(result.params, ckpt);
  const std::string curve = out_path(cfg, "curve.csv");
  ppo::write_curve_file(result.curve, curve);

  RunReport report;
  report.command = "train";
  report.config_path = config_path;
  report.seeds = {cfg.seed};
  report.wall_clock_ms = timer.elapsed_ms();
  write_report_file(report, out_path(cfg, "train_report.json"));

  log_info("wrote checkpoint " + ckpt + " and curve " + curve);
  return 0;
}

int cmd_eval(const RunConfig& cfg, const std::string& config_path) {
  Stopwatch timer;
  ensure_out_dir(cfg);
  const std::vector<TaskSpec> trace = resolve_trace(cfg);
  const std::vector<SchedulerResult> rows =
      run_comparison(cfg, trace, {}, cfg.schedulers);
  std::cout << compare_table_text(rows);

  RunReport report;
  report.command = "eval";
  report.config_path = config_path;
  report.seeds = effective_seeds(cfg);
  report.results = rows;
  report.wall_clock_ms = timer.elapsed_ms();
  write_report_file(report, out_path(cfg, "eval_report.json"));
  return 0;
}

int cmd_compare(const RunConfig& cfg, const std::string& config_path) {
  Stopwatch timer;
  ensure_out_dir(cfg);
  const std::vector<TaskSpec> trace = resolve_trace(cfg);
  const std::vector<SchedulerResult> rows =
      run_comparison(cfg, trace, {}, cfg.schedulers);
  std::cout << compare_table_text(rows);

  write_compare_csv(rows, out_path(cfg, "compare.csv"));

  RunReport report;
  report.command = "compare";
  report.config_path = config_path;
  report.seeds = effective_seeds(cfg);
  report.results = rows;
  report.wall_clock_ms = timer.elapsed_ms();
  write_report_file(report, out_path(cfg, "compare_report.json"));
  log_info("wrote " + out_path(cfg, "compare.csv"));
  return 0;
}

namespace {

int sweep_load_phases(const RunConfig& cfg, const std::string& config_path,
                      Stopwatch& timer) {
  if (!cfg.workload.has_value()) {
    throw std::runtime_error("load_phases sweep needs a workload section");
  }
  std::ofstream csv(out_path(cfg, "sweep_load_phases.csv"), std::ios::binary);
  if (!csv) throw std::runtime_error("cannot write sweep_load_phases.csv");
  csv << "condition,scheduler,avg_delay_ms_mean,avg_delay_ms_std,"
         "utilization_pct_mean,utilization_pct_std,jfi_mean,jfi_std,"
         "mean_reward_mean,mean_reward_std,completed_mean\n";

  std::vector<Series> jfi_series(cfg.schedulers.size());
  std::vector<Series> delay_series(cfg.schedulers.size());
  for (std::size_t s = 0; s < cfg.schedulers.size(); ++s) {
    jfi_series[s].label = cfg.schedulers[s];
    delay_series[s].label = cfg.schedulers[s];
  }

  RunReport report;
  for (std::size_t pi = 0; pi < cfg.workload->phases.size(); ++pi) {
    const workload::LoadPhase& phase = cfg.workload->phases[pi];
    workload::WorkloadConfig wc = *cfg.workload;
    wc.phases = {phase};
    const std::vector<TaskSpec> trace = workload::generate_workload(wc);
    const std::vector<SchedulerResult> rows =
        run_comparison(cfg, trace, {}, cfg.schedulers);
    for (std::size_t s = 0; s < rows.size(); ++s) {
      const SchedulerResult& r = rows[s];
      csv << phase.name << ',' << r.scheduler << ','
          << fixed6(r.avg_delay_ms_mean) << ',' << fixed6(r.avg_delay_ms_std)
          << ',' << fixed6(r.utilization_pct_mean) << ','
          << fixed6(r.utilization_pct_std) << ',' << fixed6(r.jfi_mean) << ','
          << fixed6(r.jfi_std) << ',' << fixed6(r.mean_reward_mean) << ','
          << fixed6(r.mean_reward_std) << ',' << fixed6(r.completed_mean)
          << "\n";
      jfi_series[s].points.emplace_back(static_cast<double>(pi), r.jfi_mean);
      delay_series[s].points.emplace_back(static_cast<double>(pi),
                                          r.avg_delay_ms_mean);
      SchedulerResult tagged = r;
      tagged.scheduler = phase.name + ":" + r.scheduler;
      report.results.push_back(tagged);
    }
    log_info("condition " + phase.name + " done");
  }
  if (!csv.flush()) throw std::runtime_error("failed writing sweep CSV");

  write_line_chart_file(out_path(cfg, "sweep_load_phases_jfi.svg"),
                        "Fairness across load conditions", "condition index",
                        "JFI", jfi_series);
  write_line_chart_file(out_path(cfg, "sweep_load_phases_delay.svg"),
                        "Delay across load conditions", "condition index",
                        "mean delay (ms)", delay_series);

  report.command = "sweep";
  report.config_path = config_path;
  report.seeds = effective_seeds(cfg);
  report.wall_clock_ms = timer.elapsed_ms();
  write_report_file(report, out_path(cfg, "sweep_report.json"));
  log_info("wrote " + out_path(cfg, "sweep_load_phases.csv"));
  return 0;
}

}  // namespace

std::vector<double> jfi_window_series(mdp::SchedulingEnv& env,
                                      baselines::SchedulerPolicy& policy,
                                      Rng& rng, TimeMs window) {
  env.reset();
  policy.reset();
  std::vector<std::pair<TimeMs, double>> rec;
  while (!env.done()) {
    const std::size_t a =
        policy.decide(env.state(), env.current_task(), env.mask(), rng);
    env.step(a);
    rec.emplace_back(env.state().clock(), cumulative_jfi(env.state()));
  }
  const TimeMs end = env.state().clock();

  std::vector<double> out;
  double cur = 1.0;
  std::size_t i = 0;
  for (TimeMs b = window;; b += window) {
    while (i < rec.size() && rec[i].first <= b) cur = rec[i++].second;
    out.push_back(cur);
    if (b >= end) break;
  }
  return out;
}

namespace {

int sweep_fluctuation(const RunConfig& cfg, const std::string& config_path,
                      Stopwatch& timer) {
  const std::vector<TaskSpec> trace = resolve_trace(cfg);

  workload::FluctuationConfig fc = cfg.fluctuation;
  fc.num_nodes = static_cast<std::uint32_t>(cfg.cluster.node_capacities.size());
  fc.seed = cfg.seed;
  if (fc.interval_ms <= 0) fc.interval_ms = 10000;
  if (fc.horizon_ms <= 0) {
    TimeMs last_submit = 0;
    for (const TaskSpec& t : trace) {
      last_submit = std::max(last_submit, t.submit_time_ms);
    }
    fc.horizon_ms = std::max<TimeMs>(last_submit, fc.interval_ms);
  }
  const std::vector<sim::SimEvent> events = workload::generate_fluctuation(fc);

  mdp::SchedulingEnv env(build_env_config(cfg, trace, events));
  const std::vector<std::uint64_t> seeds = effective_seeds(cfg);

  std::vector<Series> chart;
  RunReport report;
  for (const std::string& name : cfg.schedulers) {
    std::unique_ptr<baselines::SchedulerPolicy> policy =
        build_policy(name, cfg, env.mdp_config());

    std::vector<std::vector<double>> per_seed;
    for (std::uint64_t seed : seeds) {
      Rng rng(Rng::derive(seed, fnv1a64(name)));
      per_seed.push_back(
          jfi_window_series(env, *policy, rng, cfg.jfi_window_ms));
    }
    std::size_t n_windows = 0;
    for (const auto& s : per_seed) n_windows = std::max(n_windows, s.size());
    for (auto& s : per_seed) {
      while (s.size() < n_windows) s.push_back(s.back());
    }

    std::ofstream csv(out_path(cfg, "jfi_series_" + name + ".csv"),
                      std::ios::binary);
    if (!csv) throw std::runtime_error("cannot write jfi series for " + name);
    csv << "window_end_ms,jfi_mean,jfi_std\n";
    Series series;
    series.label = name;
    for (std::size_t w = 0; w < n_windows; ++w) {
      std::vector<double> vals;
      for (const auto& s : per_seed) vals.push_back(s[w]);
      const auto [mean, sd] = mean_std(vals);
      const TimeMs window_end = static_cast<TimeMs>(w + 1) * cfg.jfi_window_ms;
      csv << window_end << ',' << fixed6(mean) << ',' << fixed6(sd) << "\n";
      series.points.emplace_back(static_cast<double>(window_end), mean);
    }
    if (!csv.flush()) throw std::runtime_error("failed writing jfi series");
    chart.push_back(std::move(series));

    SchedulerResult row;
    row.scheduler = name;
    row.jfi_mean = chart.back().points.empty()
                       ? 1.0
                       : chart.back().points.back().second;
    report.results.push_back(row);
    log_info("scheduler " + name + " series done");
  }

  write_line_chart_file(out_path(cfg, "sweep_fluctuation_jfi.svg"),
                        "Fairness under capacity fluctuation", "time (ms)",
                        "JFI", chart);

  report.command = "sweep";
  report.config_path = config_path;
  report.seeds = seeds;
  report.wall_clock_ms = timer.elapsed_ms();
  write_report_file(report, out_path(cfg, "sweep_report.json"));
  log_info("wrote " + out_path(cfg, "sweep_fluctuation_jfi.svg"));
  return 0;
}

}  // namespace

int cmd_sweep(const RunConfig& cfg, const std::string& config_path) {
  Stopwatch timer;
  ensure_out_dir(cfg);
  if (cfg.sweep_mode == "load_phases") {
    return sweep_load_phases(cfg, config_path, timer);
  }
  if (cfg.sweep_mode == "fluctuation") {
    return sweep_fluctuation(cfg, config_path, timer);
  }
  throw std::runtime_error(
      "sweep.mode must be 'load_phases' or 'fluctuation', got '" +
      cfg.sweep_mode + "'");
}

}  // namespace tsched::harness
