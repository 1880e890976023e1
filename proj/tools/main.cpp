#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "wdsmc/config.hpp"
#include "wdsmc/errors.hpp"
#include "wdsmc/harness.hpp"

namespace {

// Exit codes: 0 success, 2 configuration problems, 3 degenerate runs,
// 4 file-system problems, 1 anything unexpected.
constexpr int kOk = 0;
constexpr int kUnexpected = 1;
constexpr int kConfig = 2;
constexpr int kDegenerate = 3;
constexpr int kIo = 4;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian parameter estimation for many-particle systems from "
               "aggregate observations"};
  app.require_subcommand(1);

  wdsmc::CliOptions opt;
  double ingest_sigma = -1.0;

  auto add_config_flags = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "JSON run configuration")
        ->required();
    sub->add_option("--out", opt.out_dir, "output directory (overrides output_dir)");
    sub->add_option("--seed", opt.seed, "master seed (overrides the config)");
    sub->add_option("--set", opt.overrides,
                    "KEY=VALUE config override, repeatable (e.g. scenario.dt=0.05)");
  };

  CLI::App* simulate = app.add_subcommand(
      "simulate", "Simulate the configured system and write noisy observations");
  add_config_flags(simulate);

  CLI::App* infer = app.add_subcommand(
      "infer", "Run the posterior sampler against observations");
  add_config_flags(infer);
  infer->add_option("--obs", opt.obs_path,
                    "observation table (generated from the config when omitted)");
  infer->add_flag("--snapshots", opt.snapshots,
                  "also record the full weighted ensemble after every step");

  CLI::App* report = app.add_subcommand(
      "report", "Write density grids and distance comparisons for a finished run");
  report->add_option("--out", opt.out_dir, "run directory to report on")->required();
  report->add_option("--steps", opt.steps, "steps to report (default: 1, T/3, T)")
      ->delimiter(',');

  CLI::App* ingest = app.add_subcommand(
      "ingest", "Normalize an external observation table into a run directory");
  ingest->add_option("--obs", opt.obs_path, "observation table to ingest")->required();
  ingest->add_option("--out", opt.out_dir, "output directory")->required();
  ingest->add_option("--sigma", ingest_sigma,
                     "noise level to record (keeps the sidecar value when negative)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    if (code == 0) return kOk;  // help and friends
    std::cerr << "config error: invalid command line\n";
    return kConfig;
  }

  try {
    if (app.got_subcommand(simulate)) {
      opt.seed_set = simulate->count("--seed") > 0;
      wdsmc::run_simulate(wdsmc::load_effective_config(opt));
    } else if (app.got_subcommand(infer)) {
      opt.seed_set = infer->count("--seed") > 0;
      wdsmc::run_infer(wdsmc::load_effective_config(opt), opt.obs_path, opt.snapshots);
    } else if (app.got_subcommand(report)) {
      wdsmc::run_report(opt.out_dir, opt.steps);
    } else if (app.got_subcommand(ingest)) {
      wdsmc::run_ingest(opt.obs_path, opt.out_dir, ingest_sigma);
    }
    return kOk;
  } catch (const wdsmc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const wdsmc::ParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const wdsmc::InvalidSpecError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const wdsmc::TotalDegeneracyError& e) {
    std::cerr << "degenerate run: " << e.what() << "\n";
    return kDegenerate;
  } catch (const wdsmc::PriorExhaustedError& e) {
    std::cerr << "degenerate run: " << e.what() << "\n";
    return kDegenerate;
  } catch (const wdsmc::DegenerateTrajectoryError& e) {
    std::cerr << "degenerate run: " << e.what() << "\n";
    return kDegenerate;
  } catch (const wdsmc::PlacementFailureError& e) {
    std::cerr << "degenerate run: " << e.what() << "\n";
    return kDegenerate;
  } catch (const wdsmc::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUnexpected;
  }
}
