#include "wdsmc/harness.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <set>

#include <json.hpp>

#include "wdsmc/density.hpp"
#include "wdsmc/errors.hpp"
#include "wdsmc/io.hpp"
#include "wdsmc/random.hpp"
#include "wdsmc/smcs.hpp"
#include "wdsmc/transport.hpp"

namespace wdsmc {

namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir + ": " + ec.message());
}

std::string join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

void write_run_record(const RunConfig& config, const std::string& command,
                      const std::vector<std::string>& files) {
  ordered_json record;
  record["command"] = command;
  record["model"] = config.model;
  record["seed"] = config.seed;
  record["config"] = config.document;
  record["files"] = files;
  write_text_file(join(config.output_dir, "run_record.json"), record.dump(2) + "\n");
}

// Weighted mean of the final snapshot's parameter columns.
Eigen::VectorXd weighted_mean(const Eigen::MatrixXd& thetas, const Eigen::VectorXd& weights) {
  return thetas.transpose() * (weights / weights.sum());
}

ParameterVector overlay(const ParameterVector& base, const std::vector<std::string>& names,
                        const Eigen::VectorXd& values) {
  ParameterVector out = base;
  for (std::size_t k = 0; k < names.size(); ++k) {
    bool found = false;
    for (std::size_t i = 0; i < out.names.size(); ++i)
      if (out.names[i] == names[k]) {
        out.values[static_cast<Eigen::Index>(i)] = values[static_cast<Eigen::Index>(k)];
        found = true;
      }
    if (!found) throw InvalidSpecError("unknown parameter " + names[k]);
  }
  return out;
}

HistogramSpec report_grid(const Box& bounds) {
  HistogramSpec spec;
  const int cells = 50;
  const Eigen::Index dim = bounds.lo.size();
  spec.origin = bounds.lo;
  spec.cell_size = (bounds.hi - bounds.lo) / static_cast<double>(cells);
  for (Eigen::Index k = 0; k < dim; ++k)
    if (spec.cell_size[k] <= 0.0) {
      // Flat axis (a one-lane road has no lateral extent): unit span.
      spec.origin[k] = bounds.lo[k] - 0.5;
      spec.cell_size[k] = 1.0 / cells;
    }
  spec.axis_counts.assign(static_cast<std::size_t>(dim), cells);
  spec.validate();
  return spec;
}

// KDE when possible; an all-zero grid records "no estimate" for thin frames.
DensityGrid grid_of(const Eigen::MatrixXd& points, const HistogramSpec& spec) {
  if (points.rows() >= 2) return kde(points, spec);
  DensityGrid grid;
  grid.origin = spec.origin;
  grid.cell_size = spec.cell_size;
  grid.axis_counts = spec.axis_counts;
  grid.values = Eigen::VectorXd::Zero(spec.cell_count());
  grid.degenerate_spread = true;
  return grid;
}

double cloud_distance(const DiscreteDistribution& observed, const Eigen::MatrixXd& frame) {
  if (frame.rows() == 0) return std::nan("");
  return wasserstein_distance(observed, empirical(frame));
}

}  // namespace

RunConfig load_effective_config(const CliOptions& options) {
  if (options.config_path.empty()) throw ConfigError("--config is required");
  const std::string text = read_text_file(options.config_path);
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(options.config_path + ": " + e.what());
  }
  for (const auto& assignment : options.overrides) apply_override(doc, assignment);
  if (options.seed_set) doc["seed"] = options.seed;
  if (!options.out_dir.empty()) doc["output_dir"] = options.out_dir;
  RunConfig cfg = parse_config(doc);
  cfg.source_text = text;
  return cfg;
}

ObservationSeries observe_trajectory(const Trajectory& trajectory, double noise_sigma,
                                     std::uint64_t seed) {
  ObservationSeries obs;
  obs.noise_sigma = noise_sigma;
  for (int t = 1; t <= trajectory.horizon(); ++t) {
    Rng rng = substream(seed, {static_cast<std::uint64_t>(t), 0, kStreamObserve});
    obs.observations.push_back(observe(trajectory.frames[t - 1], noise_sigma, rng));
    obs.times.push_back(trajectory.frame_times[t - 1]);
  }
  return obs;
}

void run_simulate(const RunConfig& config) {
  if (config.output_dir.empty()) throw ConfigError("output_dir: is required (or pass --out)");
  ensure_dir(config.output_dir);
  BuiltModel built = build_model(config);

  Trajectory truth = built.model->simulate(built.truth, config.horizon);
  const ValidationResult check =
      validate_trajectory(truth, built.model->speed_cap(), built.model->bounds());
  if (!check.ok)
    throw DegenerateTrajectoryError("configured truth is degenerate at frame " +
                                    std::to_string(check.frame) + ": " + check.reason);
  ObservationSeries obs = observe_trajectory(truth, config.noise_sigma, config.seed);

  write_text_file(join(config.output_dir, "config.json"), config.source_text);
  write_trajectory(join(config.output_dir, "truth.csv"), truth);
  write_observations(join(config.output_dir, "observations.csv"), obs);
  write_run_record(config, "simulate",
                   {"config.json", "truth.csv", "observations.csv"});
}

void run_infer(const RunConfig& config, const std::string& obs_path, bool snapshots) {
  if (config.output_dir.empty()) throw ConfigError("output_dir: is required (or pass --out)");
  if (config.inferred.empty()) throw ConfigError("inferred: at least one parameter is required");
  ensure_dir(config.output_dir);
  BuiltModel built = build_model(config);

  ObservationSeries obs;
  std::vector<std::string> files = {"config.json", "observations.csv",
                                    "posterior_trace.csv", "posterior_samples.csv"};
  if (obs_path.empty()) {
    Trajectory truth = built.model->simulate(built.truth, config.horizon);
    const ValidationResult check =
        validate_trajectory(truth, built.model->speed_cap(), built.model->bounds());
    if (!check.ok)
      throw DegenerateTrajectoryError("configured truth is degenerate at frame " +
                                      std::to_string(check.frame) + ": " + check.reason);
    obs = observe_trajectory(truth, config.noise_sigma, config.seed);
    write_trajectory(join(config.output_dir, "truth.csv"), truth);
    files.push_back("truth.csv");
  } else {
    obs = read_observations(obs_path);
  }
  if (obs.horizon() < config.horizon)
    throw ConfigError("horizon: observations cover only " + std::to_string(obs.horizon()) +
                      " steps");

  write_text_file(join(config.output_dir, "config.json"), config.source_text);
  write_observations(join(config.output_dir, "observations.csv"), obs);

  SmcsConfig engine_config;
  engine_config.n_samples = config.samples;
  engine_config.horizon = config.horizon;
  engine_config.seed = config.seed;
  engine_config.ess_threshold = config.ess_threshold;
  engine_config.proposal_std = built.proposal_std;

  PosteriorTraceWriter trace_writer(join(config.output_dir, "posterior_trace.csv"),
                                    built.prior.names);
  engine_config.on_step = [&](const StepRecord& rec) { trace_writer.append(rec); };

  std::unique_ptr<SnapshotWriter> snapshot_writer;
  if (snapshots) {
    snapshot_writer = std::make_unique<SnapshotWriter>(
        join(config.output_dir, "snapshots.csv"), built.prior.names);
    engine_config.on_snapshot = [&](int t, const Eigen::MatrixXd& thetas,
                                    const Eigen::VectorXd& weights) {
      snapshot_writer->append(t, thetas, weights);
    };
    files.push_back("snapshots.csv");
  }

  SmcsEngine engine(built.model.get(), &obs, built.prior, engine_config);
  SmcsResult result = engine.run();

  SnapshotWriter samples_writer(join(config.output_dir, "posterior_samples.csv"),
                                built.prior.names);
  samples_writer.append(config.horizon, result.thetas, result.weights);

  write_run_record(config, "infer", files);
}

void run_report(const std::string& run_dir, std::vector<int> steps) {
  const std::string record_path = join(run_dir, "run_record.json");
  ordered_json record;
  try {
    record = ordered_json::parse(read_text_file(record_path));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(record_path + ": " + e.what());
  }
  if (!record.contains("config")) throw ParseError(record_path + ": missing config");
  RunConfig config = parse_config(record["config"]);
  BuiltModel built = build_model(config);

  ObservationSeries obs = read_observations(join(run_dir, "observations.csv"));

  const int horizon = std::min(config.horizon, obs.horizon());
  if (steps.empty())
    steps = {1, static_cast<int>(std::ceil(horizon / 3.0)), horizon};
  std::set<int> wanted;
  for (int t : steps) {
    if (t < 1 || t > horizon)
      throw ConfigError("steps: " + std::to_string(t) + " is outside 1.." +
                        std::to_string(horizon));
    wanted.insert(t);
  }

  // Truth frames: prefer the recorded table so the report never depends on
  // re-simulation; fall back to the configured truth parameters.
  Trajectory truth;
  bool have_truth = fs::exists(join(run_dir, "truth.csv"));
  if (have_truth)
    truth = read_trajectory(join(run_dir, "truth.csv"));
  else
    truth = built.model->simulate(built.truth, horizon);

  // Reference simulations at the prior center and the posterior mean.
  ParameterVector prior_theta = built.truth;
  ParameterVector posterior_theta = built.truth;
  if (!config.inferred.empty()) {
    Eigen::VectorXd center = 0.5 * (built.prior.low + built.prior.high);
    prior_theta = overlay(built.truth, built.prior.names, center);
    const std::string samples_path = join(run_dir, "posterior_samples.csv");
    if (fs::exists(samples_path)) {
      const std::vector<SnapshotFrame> frames = read_snapshots(samples_path);
      if (frames.empty()) throw ParseError(samples_path + ": no snapshot rows");
      const SnapshotFrame& last = frames.back();
      posterior_theta =
          overlay(built.truth, built.prior.names, weighted_mean(last.thetas, last.weights));
    }
  }
  Trajectory prior_sim = built.model->simulate(prior_theta, horizon);
  Trajectory posterior_sim = built.model->simulate(posterior_theta, horizon);

  const std::string report_dir = join(run_dir, "report");
  ensure_dir(report_dir);
  const HistogramSpec spec = report_grid(built.model->bounds());

  std::vector<WdComparisonRow> rows;
  for (int t : wanted) {
    const DiscreteDistribution& observed = obs.observations[t - 1];
    const Eigen::MatrixXd& truth_frame = truth.frames[t - 1];
    const Eigen::MatrixXd& prior_frame = prior_sim.frames[t - 1];
    const Eigen::MatrixXd& posterior_frame = posterior_sim.frames[t - 1];

    const std::string tag = "_t" + std::to_string(t) + ".csv";
    write_density_grid(join(report_dir, "kde_truth" + tag), grid_of(truth_frame, spec));
    write_density_grid(join(report_dir, "kde_observed" + tag),
                       grid_of(observed.points, spec));
    write_density_grid(join(report_dir, "kde_prior_sim" + tag), grid_of(prior_frame, spec));
    write_density_grid(join(report_dir, "kde_posterior_sim" + tag),
                       grid_of(posterior_frame, spec));

    WdComparisonRow row;
    row.t = t;
    row.wd0 = cloud_distance(observed, truth_frame);
    row.wd1 = cloud_distance(observed, prior_frame);
    row.wd2 = cloud_distance(observed, posterior_frame);
    rows.push_back(row);
  }
  write_wd_comparison(join(report_dir, "wd_comparison.csv"), rows);
}

void run_ingest(const std::string& obs_path, const std::string& out_dir, double noise_sigma) {
  if (obs_path.empty()) throw ConfigError("--obs is required");
  if (out_dir.empty()) throw ConfigError("--out is required");
  ObservationSeries obs = read_observations(obs_path);
  if (noise_sigma >= 0.0) obs.noise_sigma = noise_sigma;
  ensure_dir(out_dir);
  write_observations(join(out_dir, "observations.csv"), obs);
}

}  // namespace wdsmc
