// mmx — projection-free minimax experiment runner.
//
// Subcommands:
//   generate   write a synthetic dictionary-learning dataset + manifest
//   run        one experiment: trace.csv + summary.json
//   rate       anytime run + log-log slope fit vs a tolerance band
//   sweep      cartesian parameter grid on a bounded worker pool
//
// Common flags: --config PATH, --set key=value (repeatable), --seed N,
// --out DIR, --workers N (sweep). Exit codes: 0 success / band pass,
// 1 band or cell failure, 2 configuration error, 3 numerical failure,
// 4 I/O failure.
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mmx/harness.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> overrides;
  long seed = -1;
  bool seed_given = false;
  std::string out_dir = ".";
};

void add_common_flags(CLI::App* cmd, CommonArgs* args) {
  cmd->add_option("--config", args->config_path,
                  "configuration file (key = value lines)");
  cmd->add_option("--set", args->overrides,
                  "override a config key, e.g. --set schedule.a=0.75")
      ->type_name("KEY=VALUE");
  cmd->add_option("--seed", args->seed, "random seed (overrides config)");
  cmd->add_option("--out", args->out_dir, "output directory (default: .)");
}

mmx::Config assemble_config(const CommonArgs& args) {
  mmx::Config config = args.config_path.empty()
                           ? mmx::Config()
                           : mmx::Config::load(args.config_path);
  for (const std::string& assignment : args.overrides) {
    config.apply_override(assignment);
  }
  if (args.seed >= 0) config.set("seed", args.seed);
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"projection-free minimax optimization toolkit"};
  app.require_subcommand(1);

  CommonArgs generate_args, run_args, rate_args, sweep_args;
  long workers = 0;

  CLI::App* generate = app.add_subcommand(
      "generate", "write a synthetic dictionary-learning dataset");
  add_common_flags(generate, &generate_args);

  CLI::App* run_cmd =
      app.add_subcommand("run", "run one experiment and write its trace");
  add_common_flags(run_cmd, &run_args);

  CLI::App* rate = app.add_subcommand(
      "rate", "fit an empirical convergence slope against a tolerance band");
  add_common_flags(rate, &rate_args);

  CLI::App* sweep = app.add_subcommand(
      "sweep", "run a cartesian parameter grid in parallel");
  add_common_flags(sweep, &sweep_args);
  sweep->add_option("--workers", workers,
                    "worker threads (default: MMX_WORKERS or hardware)");

  CLI11_PARSE(app, argc, argv);

  if (generate->parsed()) {
    return mmx::run_mapped([&]() {
      mmx::cmd_generate(assemble_config(generate_args),
                        generate_args.out_dir);
      return 0;
    });
  }
  if (run_cmd->parsed()) {
    return mmx::run_mapped([&]() {
      mmx::RunArtifacts artifacts =
          mmx::cmd_run(assemble_config(run_args), run_args.out_dir);
      std::cout << artifacts.summary["final"].dump(2) << "\n";
      return 0;
    });
  }
  if (rate->parsed()) {
    return mmx::run_mapped([&]() {
      mmx::RateArtifacts artifacts =
          mmx::cmd_rate(assemble_config(rate_args), rate_args.out_dir);
      std::cout << "slope " << artifacts.estimate.slope << " vs theory "
                << artifacts.report["theory"].dump() << ", band "
                << artifacts.report["band"].dump()
                << (artifacts.pass ? ": pass" : ": FAIL") << "\n";
      return artifacts.pass ? 0 : 1;
    });
  }
  return mmx::run_mapped([&]() {
    mmx::SweepArtifacts artifacts =
        mmx::cmd_sweep(assemble_config(sweep_args), sweep_args.out_dir,
                       workers);
    std::cout << artifacts.cells << " cells, " << artifacts.failed
              << " failed\n";
    return artifacts.failed == 0 ? 0 : 1;
  });
}
