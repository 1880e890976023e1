#pragma once

// End-to-end pipelines behind the command-line entry points. Every run
// writes a self-contained directory: the original config bytes, the
// effective settings in run_record.json, the observation (and truth)
// tables, and the sampler outputs. Rerunning with the same seed writes
// byte-identical files.

#include <cstdint>
#include <string>
#include <vector>

#include "wdsmc/config.hpp"
#include "wdsmc/model.hpp"

namespace wdsmc {

struct CliOptions {
  std::string config_path;
  std::string obs_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
  bool snapshots = false;
  std::vector<std::string> overrides;
  std::vector<int> steps;
};

// Config file + --set overrides + --seed/--out, validated.
RunConfig load_effective_config(const CliOptions& options);

// Simulates the configured truth, observes it with noise, writes
// truth.csv, observations.csv, config.json, and run_record.json.
void run_simulate(const RunConfig& config);

// Posterior sampling against observations (given, or generated from the
// configured truth when obs_path is empty). Writes posterior_trace.csv
// (flushed per step), posterior_samples.csv, and optional snapshots.csv.
void run_infer(const RunConfig& config, const std::string& obs_path, bool snapshots);

// Reads a finished run directory and writes report/ with density grids
// for truth, observed, prior-center, and posterior-mean clouds plus
// wd_comparison.csv at the selected steps (default 1, ceil(T/3), T).
void run_report(const std::string& run_dir, std::vector<int> steps);

// Normalizes an external observation table into canonical files under
// out_dir; noise_sigma overrides the sidecar value when nonnegative.
void run_ingest(const std::string& obs_path, const std::string& out_dir, double noise_sigma);

// Noisy observations of a trajectory, one substream per step.
ObservationSeries observe_trajectory(const Trajectory& trajectory, double noise_sigma,
                                     std::uint64_t seed);

}  // namespace wdsmc
