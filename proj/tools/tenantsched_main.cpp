#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tenantsched/config.hpp"
#include "tenantsched/harness.hpp"
#include "tenantsched/text.hpp"

namespace {

std::vector<std::string> split_names(const std::string& csv) {
  std::vector<std::string> out;
  for (std::string_view part : tsched::split(csv, ',')) {
    const std::string_view name = tsched::trim(part);
    if (!name.empty()) out.emplace_back(name);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "tenantsched: discrete-event multi-tenant cluster scheduling "
      "experiments (set TENANTSCHED_LOG=quiet|info|debug for verbosity)"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::string schedulers_csv;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON run configuration")
        ->required();
    sub->add_option("--seed", seed, "override every seed in the config");
    sub->add_option("--out", out_dir, "override the output directory");
    sub->add_option("--schedulers", schedulers_csv,
                    "comma-separated scheduler list override");
  };

  CLI::App* gen = app.add_subcommand("gen-trace", "generate a workload trace");
  CLI::App* train = app.add_subcommand("train", "train the RL scheduler");
  CLI::App* eval = app.add_subcommand("eval", "evaluate configured schedulers");
  CLI::App* compare =
      app.add_subcommand("compare", "compare schedulers on one trace");
  CLI::App* sweep =
      app.add_subcommand("sweep", "run a load_phases or fluctuation sweep");
  for (CLI::App* sub : {gen, train, eval, compare, sweep}) add_common(sub);

  CLI11_PARSE(app, argc, argv);

  try {
    tsched::harness::RunConfig cfg = tsched::harness::load_config(config_path);
    tsched::harness::apply_overrides(cfg, seed, out_dir,
                                     split_names(schedulers_csv));
    if (gen->parsed()) return tsched::harness::cmd_gen_trace(cfg);
    if (train->parsed()) return tsched::harness::cmd_train(cfg, config_path);
    if (eval->parsed()) return tsched::harness::cmd_eval(cfg, config_path);
    if (compare->parsed()) {
      return tsched::harness::cmd_compare(cfg, config_path);
    }
    if (sweep->parsed()) return tsched::harness::cmd_sweep(cfg, config_path);
    std::cerr << "error: no command selected\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
