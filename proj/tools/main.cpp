#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wavesrc/runner.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = 0;
  std::string stage_from;
};

wavesrc::runner::ExperimentConfig load(const CommonArgs& args) {
  auto config = wavesrc::runner::load_config(args.config_path);
  if (args.seed_set) config.seed = args.seed;
  if (!args.out_dir.empty()) config.output_dir = args.out_dir;
  return config;
}

void add_common(CLI::App* cmd, CommonArgs& args, bool needs_config = true) {
  auto* opt = cmd->add_option("--config", args.config_path, "experiment config (JSON)");
  if (needs_config) opt->required();
  cmd->add_option("--seed", args.seed, "root seed override")
      ->each([&args](const std::string&) { args.seed_set = true; });
  cmd->add_option("--out", args.out_dir, "output directory override");
  cmd->add_option("--threads", args.threads,
                  "worker threads (default: WAVESRC_THREADS env or library default)");
  cmd->add_option("--stage-from", args.stage_from,
                  "resume from stage: sample, estimate, recover");
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"random-source wave toolkit"};
  app.require_subcommand(1);

  CommonArgs validate_args, run_args, sweep_args, report_args;
  std::string sweep_axis;
  std::vector<double> sweep_values;

  auto* cmd_validate =
      app.add_subcommand("validate", "check a config and exit");
  add_common(cmd_validate, validate_args);

  auto* cmd_run = app.add_subcommand("run", "execute the full pipeline");
  add_common(cmd_run, run_args);

  auto* cmd_sweep = app.add_subcommand("sweep", "convergence sweep over one axis");
  add_common(cmd_sweep, sweep_args);
  cmd_sweep->add_option("--axis", sweep_axis,
                        "q, directions, tau_max, or realizations")
      ->required();
  cmd_sweep->add_option("--values", sweep_values, "axis values (>= 3)")
      ->required()
      ->expected(-3);

  auto* cmd_report = app.add_subcommand("report", "print a run's report");
  cmd_report->add_option("--out", report_args.out_dir, "run output directory")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_validate->parsed()) {
      const auto config = load(validate_args);
      wavesrc::runner::validate_config(config);
      std::printf("config ok: %s, d=%d, m=%g, grid %d^%d\n",
                  wavesrc::waves::model_name(config.kind.model), config.d,
                  config.order_m, config.grid.n, config.d);
      return kExitOk;
    }
    if (cmd_run->parsed()) {
      wavesrc::runner::apply_threads(run_args.threads);
      const auto config = load(run_args);
      const auto manifest = wavesrc::runner::run(config, run_args.stage_from);
      std::printf("run %s complete; manifest at %s/manifest.json\n",
                  manifest.config_key.c_str(), config.output_dir.c_str());
      return kExitOk;
    }
    if (cmd_sweep->parsed()) {
      wavesrc::runner::apply_threads(sweep_args.threads);
      const auto config = load(sweep_args);
      wavesrc::runner::convergence_sweep(config, sweep_axis, sweep_values);
      std::printf("sweep complete; trace at %s/sweep_%s.csv\n",
                  config.output_dir.c_str(), sweep_axis.c_str());
      return kExitOk;
    }
    if (cmd_report->parsed()) {
      std::ifstream in(report_args.out_dir + "/recovery_report.txt");
      if (!in) {
        std::fprintf(stderr, "no recovery_report.txt under %s\n",
                     report_args.out_dir.c_str());
        return kExitConfig;
      }
      std::cout << in.rdbuf();
      return kExitOk;
    }
  } catch (const wavesrc::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const wavesrc::DomainError& e) {
    std::fprintf(stderr, "domain error: %s\n", e.what());
    return kExitConfig;
  } catch (const wavesrc::NumericalError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "failure: %s\n", e.what());
    return kExitNumerical;
  }
  return kExitOk;
}
