// Command-line front end for the selection-regime simulation library.
//
// Talks to the engine exclusively through the C API (posthoc.h); all model
// logic, parallelism, and file formats live behind that boundary.

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "posthoc.h"

namespace {

// Options shared by the run-style subcommands (simulate/sweep/figure/oracle).
struct RunOptions {
  std::string config_path;
  std::string out_dir = "out";
  std::string format;  // empty = both csv and json
  std::uint64_t seed = 42;
  bool seed_set = false;
  std::int64_t trials = 0;
  bool trials_set = false;
  int workers = 1;
  bool plot = false;
};

void add_common_flags(CLI::App* cmd, RunOptions* opt, bool with_config) {
  if (with_config) {
    cmd->add_option("--config", opt->config_path, "JSON configuration file")
        ->required();
  }
  cmd->add_option("--seed", opt->seed, "master RNG seed (overrides the config)")
      ->each([opt](const std::string&) { opt->seed_set = true; });
  cmd->add_option("--trials", opt->trials, "trial count (overrides the config)")
      ->each([opt](const std::string&) { opt->trials_set = true; });
  cmd->add_option("--out", opt->out_dir, "output directory")
      ->capture_default_str();
  cmd->add_option("--format", opt->format, "emit only this format")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--workers", opt->workers, "worker thread count")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

int exit_code_for(ph_status status) {
  switch (status) {
    case PH_OK:
      return 0;
    case PH_ERR_CONFIG:
    case PH_ERR_BUDGET:  // instance infeasible as configured
    case PH_ERR_IO:
      return 2;
    default:
      return 1;
  }
}

int report_failure(const char* stage, ph_status status) {
  std::fprintf(stderr, "error: %s: %s\n", stage, ph_last_error());
  return exit_code_for(status);
}

// Runs a parsed config end to end and emits the requested artifact files.
int run_and_emit(ph_config* config, const RunOptions& opt, const std::string& stem,
                 const std::string& command_line) {
  if (opt.seed_set) ph_config_set_seed(config, opt.seed);
  if (opt.trials_set) {
    const ph_status st = ph_config_set_trials(config, opt.trials);
    if (st != PH_OK) return report_failure("applying --trials", st);
  }

  ph_result* result = nullptr;
  ph_status st = ph_run(config, opt.workers, &result);
  if (st != PH_OK) return report_failure("running", st);

  int formats = 0;
  if (opt.format.empty() || opt.format == "csv") formats |= PH_FORMAT_CSV;
  if (opt.format.empty() || opt.format == "json") formats |= PH_FORMAT_JSON;

  char* manifest_path = nullptr;
  st = ph_result_emit(result, opt.out_dir.c_str(), stem.c_str(), formats,
                      opt.plot ? 1 : 0, command_line.c_str(), &manifest_path);
  if (st != PH_OK) {
    ph_result_free(result);
    return report_failure("writing results", st);
  }
  std::printf("wrote %s\n", manifest_path);
  ph_string_free(manifest_path);
  ph_result_free(result);
  return 0;
}

// Loads --config and checks it is (or is not) a sweep, per the subcommand.
int run_config_command(const RunOptions& opt, bool expect_sweep,
                       const std::string& stem, const std::string& command_line) {
  ph_config* config = nullptr;
  ph_status st = ph_config_load(opt.config_path.c_str(), &config);
  if (st != PH_OK) return report_failure("loading config", st);

  ph_config_kind kind = PH_CONFIG_MODEL;
  ph_config_kind_of(config, &kind);
  if (expect_sweep && kind != PH_CONFIG_SWEEP) {
    std::fprintf(stderr,
                 "error: %s has no sweep block; use the simulate command\n",
                 opt.config_path.c_str());
    ph_config_free(config);
    return 2;
  }
  if (!expect_sweep && kind == PH_CONFIG_SWEEP) {
    std::fprintf(stderr,
                 "error: %s contains a sweep block; use the sweep command\n",
                 opt.config_path.c_str());
    ph_config_free(config);
    return 2;
  }

  const int rc = run_and_emit(config, opt, stem, command_line);
  ph_config_free(config);
  return rc;
}

std::string join_argv(int argc, char** argv) {
  std::string joined;
  for (int i = 0; i < argc; ++i) {
    if (i > 0) joined += ' ';
    joined += argv[i];
  }
  return joined;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo laboratory for a-priori vs post-hoc research selection"};
  app.require_subcommand(1);
  app.set_version_flag("--version", ph_engine_version());

  RunOptions sim_opt;
  CLI::App* sim = app.add_subcommand(
      "simulate", "run one model and report the selection decomposition");
  add_common_flags(sim, &sim_opt, true);

  RunOptions sweep_opt;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "run a parameter sweep over a grid of models");
  add_common_flags(sweep, &sweep_opt, true);
  sweep->add_flag("--plot", sweep_opt.plot, "also write an SVG chart");

  RunOptions fig_opt;
  std::string figure_name;
  CLI::App* figure = app.add_subcommand(
      "figure", "run a built-in preset (fig1, fig2, fig3, fig4)");
  figure->add_option("name", figure_name, "preset name")->required();
  add_common_flags(figure, &fig_opt, false);
  figure->add_flag("--plot", fig_opt.plot, "also write SVG charts");

  RunOptions oracle_opt;
  CLI::App* oracle = app.add_subcommand(
      "oracle", "exhaustively enumerate a small discrete instance");
  add_common_flags(oracle, &oracle_opt, true);

  bool quick = false;
  std::uint64_t validate_seed = 42;
  int validate_workers = 1;
  CLI::App* validate = app.add_subcommand(
      "validate", "run the engine's invariant self-checks");
  validate->add_flag("--quick", quick, "smaller trial counts (seconds, not minutes)");
  validate->add_option("--seed", validate_seed, "master RNG seed")
      ->capture_default_str();
  validate->add_option("--workers", validate_workers, "worker thread count")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;  // help/version exit clean; bad usage is 2
  }

  const std::string command_line = join_argv(argc, argv);

  if (sim->parsed()) {
    return run_config_command(sim_opt, false, "simulate", command_line);
  }
  if (sweep->parsed()) {
    return run_config_command(sweep_opt, true, "sweep", command_line);
  }
  if (figure->parsed()) {
    ph_config* config = nullptr;
    const ph_status st = ph_config_preset(figure_name.c_str(), &config);
    if (st != PH_OK) return report_failure("resolving preset", st);
    const int rc = run_and_emit(config, fig_opt, figure_name, command_line);
    ph_config_free(config);
    return rc;
  }
  if (oracle->parsed()) {
    ph_config* config = nullptr;
    const ph_status st = ph_oracle_config_load(oracle_opt.config_path.c_str(), &config);
    if (st != PH_OK) return report_failure("loading config", st);
    const int rc = run_and_emit(config, oracle_opt, "oracle", command_line);
    ph_config_free(config);
    return rc;
  }
  if (validate->parsed()) {
    char* report = nullptr;
    int n_failed = 0;
    const ph_status st =
        ph_validate(quick ? 1 : 0, validate_seed, validate_workers, &report, &n_failed);
    if (st != PH_OK) return report_failure("running self-checks", st);
    std::fputs(report, stdout);
    ph_string_free(report);
    return n_failed == 0 ? 0 : 1;
  }
  return 2;  // unreachable: require_subcommand(1)
}
