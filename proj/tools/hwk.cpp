// hwk: command-line driver for the transport, beam and diocotron experiments.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "hwk/config.hpp"
#include "hwk/report.hpp"
#include "hwk/runner.hpp"

namespace {

enum ExitCode : int { kOk = 0, kMismatch = 1, kConfigError = 2, kRuntimeError = 3, kIoError = 4 };

std::string dashed(std::string s) {
  for (char& c : s)
    if (c == '_') c = '-';
  return s;
}

struct RunArgs {
  std::string config_file;
  std::string experiment;
  std::map<std::string, std::string> values;
  bool snapshot_csv = false;
  bool plot_script = false;
  bool quiet = false;
};

void add_run_options(CLI::App* cmd, RunArgs& args) {
  cmd->add_option("--config", args.config_file, "flat key = value configuration file")->check(CLI::ExistingFile);
  for (const auto& key : hwk::config_keys()) {
    if (key == "experiment" || key == "snapshot_csv" || key == "plot_script") continue;
    const std::string name = key == "output" ? "-o,--output" : "--" + dashed(key);
    cmd->add_option(name, args.values[key], "overrides '" + key + "' from the config file");
  }
  cmd->add_flag("--snapshot-csv", args.snapshot_csv, "also write snapshots as CSV");
  cmd->add_flag("--plot-script", args.plot_script, "write a matplotlib script next to the time series");
  cmd->add_flag("-q,--quiet", args.quiet, "only print errors");
}

hwk::RunConfig resolve(CLI::App* cmd, const RunArgs& args, const std::string& experiment) {
  hwk::ConfigMap file;
  if (!args.config_file.empty()) {
    std::ifstream is(args.config_file);
    if (!is) throw hwk::IoError("cannot read " + args.config_file);
    std::stringstream ss;
    ss << is.rdbuf();
    file = hwk::parse_config_text(ss.str());
  }
  hwk::ConfigMap over;
  if (!experiment.empty()) over["experiment"] = experiment;
  for (const auto& [key, value] : args.values)
    if (cmd->count("--" + dashed(key)) > 0) over[key] = value;
  if (args.snapshot_csv) over["snapshot_csv"] = "true";
  if (args.plot_script) over["plot_script"] = "true";
  return hwk::parse_config(file, over);
}

int execute(const hwk::RunConfig& cfg, bool quiet) {
  const auto jobs = hwk::expand_runs(cfg);
  for (const auto& job : jobs) {
    const auto out = hwk::execute_run(job, [&](const std::string& m) {
      if (!quiet) std::cout << m << '\n';
    });
    if (!quiet)
      for (const auto& f : out.files) std::cout << "wrote " << f << '\n';
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hwk: Hermite WENO transport experiments"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "run one experiment (one job per grid size in 'n')");
  run->add_option("experiment", run_args.experiment, "transport1d, beam, diocotron or convergence");
  add_run_options(run, run_args);

  RunArgs conv_args;
  auto* converge = app.add_subcommand("converge", "L1 convergence table for 1D transport");
  add_run_options(converge, conv_args);

  std::string lhs, rhs;
  double rtol = 0.0, atol = 0.0;
  auto* compare = app.add_subcommand("compare", "compare two time-series CSV files");
  compare->add_option("a", lhs, "first CSV")->required();
  compare->add_option("b", rhs, "second CSV")->required();
  compare->add_option("--rtol", rtol, "relative tolerance")->check(CLI::NonNegativeNumber);
  compare->add_option("--atol", atol, "absolute tolerance")->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  try {
    if (*run) return execute(resolve(run, run_args, run_args.experiment), run_args.quiet);
    if (*converge) return execute(resolve(converge, conv_args, "convergence"), conv_args.quiet);
    if (*compare) {
      const auto res = hwk::compare_tables(hwk::load_csv_table(lhs), hwk::load_csv_table(rhs), rtol, atol);
      std::cout << res.message << " (max abs diff " << res.max_abs_diff << ")\n";
      return res.equal ? kOk : kMismatch;
    }
  } catch (const hwk::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kConfigError;
  } catch (const hwk::IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::exception& e) {
    std::cerr << "run failed: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kOk;
}
