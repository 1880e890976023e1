#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "wdsmc/config.hpp"
#include "wdsmc/errors.hpp"
#include "wdsmc/harness.hpp"
#include "wdsmc/io.hpp"
#include "wdsmc/model.hpp"
#include "wdsmc/random.hpp"
#include "wdsmc/smcs.hpp"

using namespace wdsmc;
using doctest::Contains;
using ordered_json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

// Unique scratch directory per test, wiped at entry so a failing run
// leaves its files behind for inspection.
std::string fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("wdsmc_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir.string();
}

ordered_json tiny_idm_doc() {
  ordered_json doc;
  doc["model"] = "idm";
  doc["seed"] = 11;
  doc["samples"] = 8;
  doc["horizon"] = 3;
  doc["noise_sigma"] = 0.05;
  doc["inferred"] = ordered_json::array(
      {{{"name", "v0"}, {"low", 5.0}, {"high", 25.0}}});
  doc["fixed"] = {{"v0", 15.0}, {"a", 1.5}, {"T_s", 1.2}};
  doc["scenario"] = {{"lane_length", 200.0}, {"n_lanes", 2}, {"arrival_rate", 3.0}};
  return doc;
}

ObservationSeries sample_observations() {
  ObservationSeries obs;
  obs.noise_sigma = 0.25;
  Eigen::MatrixXd f1(2, 2);
  f1 << 1.0 / 3.0, std::sqrt(2.0), -0.125, 7.25;
  Eigen::MatrixXd f2(3, 2);
  f2 << 0.1, 0.2, 0.3, 0.4, 0.5, 1e-17;
  obs.observations.emplace_back(f1);
  obs.observations.emplace_back(f2);
  obs.times = {0.5, 1.0};
  return obs;
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("observation files round-trip bitwise, including the sidecar") {
  const std::string dir = fresh_dir("obs_roundtrip");
  const ObservationSeries obs = sample_observations();
  const std::string path = dir + "/observations.csv";
  write_observations(path, obs);

  const ObservationSeries back = read_observations(path);
  REQUIRE(back.horizon() == 2);
  CHECK(back.noise_sigma == obs.noise_sigma);
  CHECK(back.times == obs.times);
  for (int t = 0; t < 2; ++t) {
    CHECK(back.observations[t].points == obs.observations[t].points);
    CHECK(back.observations[t].masses == obs.observations[t].masses);
  }

  // A rewrite of what was read produces identical bytes.
  const std::string copy = dir + "/copy.csv";
  write_observations(copy, back);
  CHECK(read_text_file(copy) == read_text_file(path));
  CHECK(read_text_file(dir + "/copy.meta.json") ==
        read_text_file(dir + "/observations.meta.json"));
}

TEST_CASE("observations without a sidecar get default times and zero sigma") {
  const std::string dir = fresh_dir("obs_nosidecar");
  const std::string path = dir + "/observations.csv";
  write_observations(path, sample_observations());
  fs::remove(dir + "/observations.meta.json");

  const ObservationSeries back = read_observations(path);
  CHECK(back.noise_sigma == 0.0);
  CHECK(back.times == std::vector<double>{1.0, 2.0});
}

TEST_CASE("trajectory files round-trip with varying frame sizes") {
  const std::string dir = fresh_dir("traj_roundtrip");
  Trajectory traj;
  Eigen::MatrixXd f1(2, 2);
  f1 << 0.0, 1.0, 2.0, 3.0;
  Eigen::MatrixXd f2(3, 2);
  f2 << 4.0, 5.0, 6.0, 7.0, 8.0, 9.0;
  traj.frames = {f1, f2};
  traj.frame_times = {0.25, 0.5};

  const std::string path = dir + "/truth.csv";
  write_trajectory(path, traj);
  const Trajectory back = read_trajectory(path);
  REQUIRE(back.horizon() == 2);
  CHECK(back.frames[0] == f1);
  CHECK(back.frames[1] == f2);
  CHECK(back.frame_times == traj.frame_times);
}

TEST_CASE("malformed tables are rejected with ParseError") {
  const std::string dir = fresh_dir("bad_tables");
  const std::string path = dir + "/observations.csv";

  write_text_file(path, "t,x1,x2\n1,0.5\n");  // short row
  CHECK_THROWS_AS(read_observations(path), ParseError);

  write_text_file(path, "t,x1,x2\n1,0.5,abc\n");  // non-numeric field
  CHECK_THROWS_AS(read_observations(path), ParseError);

  write_text_file(path, "t,x1,x2\n2,0.5,0.5\n");  // steps must start at 1
  CHECK_THROWS_AS(read_observations(path), ParseError);

  write_text_file(path, "x1,x2\n");  // header must lead with t
  CHECK_THROWS_AS(read_observations(path), ParseError);

  CHECK_THROWS_AS(read_observations(dir + "/missing.csv"), IoError);
}

TEST_CASE("posterior trace file has one row per parameter per step") {
  const std::string dir = fresh_dir("trace_format");
  const std::string path = dir + "/posterior_trace.csv";
  const std::vector<std::string> names = {"A", "B"};

  StepRecord r1;
  r1.t = 1;
  r1.mean = Eigen::Vector2d(1.5, 2.5);
  r1.std_dev = Eigen::Vector2d(0.25, 0.5);
  r1.ess = 40.0;
  r1.bandwidth = 0.125;
  r1.accept_rate = 0.75;
  r1.resampled = false;
  StepRecord r2 = r1;
  r2.t = 2;
  r2.resampled = true;

  {
    PosteriorTraceWriter writer(path, names);
    writer.append(r1);
    writer.append(r2);
  }
  const std::string text = read_text_file(path);
  CHECK(text ==
        "t,param,mean,std,ess,h,accept_rate,resampled\n"
        "1,A,1.5,0.25,40,0.125,0.75,0\n"
        "1,B,2.5,0.5,40,0.125,0.75,0\n"
        "2,A,1.5,0.25,40,0.125,0.75,1\n"
        "2,B,2.5,0.5,40,0.125,0.75,1\n");

  // The one-shot writer produces the same bytes.
  write_posterior_trace(dir + "/again.csv", {r1, r2}, names);
  CHECK(read_text_file(dir + "/again.csv") == text);
}

TEST_CASE("snapshot files round-trip the weighted ensemble") {
  const std::string dir = fresh_dir("snapshots");
  const std::string path = dir + "/snapshots.csv";
  Eigen::MatrixXd thetas(3, 2);
  thetas << 1.0, 2.0, 3.0, 4.0, 5.0, 6.0;
  Eigen::VectorXd weights(3);
  weights << 0.2, 0.3, 0.5;

  {
    SnapshotWriter writer(path, {"A", "B"});
    writer.append(1, thetas, weights);
    writer.append(2, 2.0 * thetas, weights);
  }
  std::vector<std::string> names;
  const std::vector<SnapshotFrame> frames = read_snapshots(path, &names);
  CHECK(names == std::vector<std::string>{"A", "B"});
  REQUIRE(frames.size() == 2);
  CHECK(frames[0].t == 1);
  CHECK(frames[0].thetas == thetas);
  CHECK(frames[0].weights == weights);
  CHECK(frames[1].t == 2);
  CHECK(frames[1].thetas == 2.0 * thetas);
}

TEST_CASE("density grid files round-trip in one and two dimensions") {
  const std::string dir = fresh_dir("grids");

  DensityGrid g1;
  g1.origin = Eigen::VectorXd::Constant(1, -2.0);
  g1.cell_size = Eigen::VectorXd::Constant(1, 0.5);
  g1.axis_counts = {4};
  g1.values = Eigen::Vector4d(0.0, 0.25, 1.0 / 3.0, 0.125);
  write_density_grid(dir + "/g1.csv", g1);
  const DensityGrid b1 = read_density_grid(dir + "/g1.csv");
  CHECK(b1.origin == g1.origin);
  CHECK(b1.cell_size == g1.cell_size);
  CHECK(b1.axis_counts == g1.axis_counts);
  CHECK(b1.values == g1.values);

  DensityGrid g2;
  g2.origin = Eigen::Vector2d(0.0, 1.0);
  g2.cell_size = Eigen::Vector2d(0.5, 0.25);
  g2.axis_counts = {2, 3};
  g2.values = Eigen::VectorXd::LinSpaced(6, 0.0, 5.0);
  write_density_grid(dir + "/g2.csv", g2);
  const DensityGrid b2 = read_density_grid(dir + "/g2.csv");
  CHECK(b2.origin == g2.origin);
  CHECK(b2.cell_size == g2.cell_size);
  CHECK(b2.axis_counts == g2.axis_counts);
  CHECK(b2.values == g2.values);
}

TEST_CASE("distance comparison table round-trips, including nan") {
  const std::string dir = fresh_dir("wd_table");
  std::vector<WdComparisonRow> rows(2);
  rows[0] = {1, 0.5, 1.25, 0.125};
  rows[1] = {3, std::nan(""), 2.0, 0.25};
  write_wd_comparison(dir + "/wd.csv", rows);

  const std::vector<WdComparisonRow> back = read_wd_comparison(dir + "/wd.csv");
  REQUIRE(back.size() == 2);
  CHECK(back[0].t == 1);
  CHECK(back[0].wd0 == 0.5);
  CHECK(back[0].wd1 == 1.25);
  CHECK(back[0].wd2 == 0.125);
  CHECK(back[1].t == 3);
  CHECK(std::isnan(back[1].wd0));
  CHECK(back[1].wd2 == 0.25);
}

TEST_CASE("config validation names the offending key") {
  ordered_json doc = tiny_idm_doc();
  CHECK_NOTHROW(parse_config(doc));

  SUBCASE("unknown top-level key") {
    doc["smaples"] = 10;
    CHECK_THROWS_WITH_AS(parse_config(doc), Contains("smaples"), ConfigError);
  }
  SUBCASE("model must be a known name") {
    doc["model"] = "gravity";
    CHECK_THROWS_WITH_AS(parse_config(doc), Contains("model"), ConfigError);
  }
  SUBCASE("samples is required") {
    doc.erase("samples");
    CHECK_THROWS_WITH_AS(parse_config(doc), Contains("samples"), ConfigError);
  }
  SUBCASE("horizon must be positive") {
    doc["horizon"] = 0;
    CHECK_THROWS_WITH_AS(parse_config(doc), Contains("horizon"), ConfigError);
  }
  SUBCASE("noise sigma must be nonnegative") {
    doc["noise_sigma"] = -0.1;
    CHECK_THROWS_WITH_AS(parse_config(doc), Contains("noise_sigma"), ConfigError);
  }
  SUBCASE("ess threshold cannot exceed the ensemble size") {
    doc["ess_threshold"] = 9.0;
    CHECK_THROWS_WITH_AS(parse_config(doc), Contains("ess_threshold"), ConfigError);
  }
  SUBCASE("every model parameter needs a fixed value") {
    doc["fixed"].erase("T_s");
    CHECK_THROWS_WITH_AS(parse_config(doc), Contains("T_s"), ConfigError);
  }
  SUBCASE("fixed names must belong to the model") {
    doc["fixed"]["A"] = 2000.0;
    CHECK_THROWS_WITH_AS(parse_config(doc), Contains("fixed.A"), ConfigError);
  }
  SUBCASE("inferred names must belong to the model") {
    doc["inferred"][0]["name"] = "B";
    CHECK_THROWS_WITH_AS(parse_config(doc), Contains("B"), ConfigError);
  }
  SUBCASE("inferred bounds must be ordered") {
    doc["inferred"][0]["low"] = 30.0;
    CHECK_THROWS_WITH_AS(parse_config(doc), Contains("low"), ConfigError);
  }
  SUBCASE("duplicate inferred parameters are rejected") {
    doc["inferred"].push_back(doc["inferred"][0]);
    CHECK_THROWS_WITH_AS(parse_config(doc), Contains("duplicate"), ConfigError);
  }
  SUBCASE("scenario keys are screened") {
    doc["scenario"]["lane_count"] = 3;
    CHECK_THROWS_WITH_AS(parse_config(doc), Contains("lane_count"), ConfigError);
  }
  SUBCASE("frame spacing cannot undercut the integrator step") {
    doc["scenario"]["dt"] = 0.5;
    doc["scenario"]["frame_spacing"] = 0.25;
    CHECK_THROWS_WITH_AS(parse_config(doc), Contains("frame_spacing"), ConfigError);
  }
}

TEST_CASE("parsing is a fixed point of dump and reparse") {
  const ordered_json doc = tiny_idm_doc();
  const RunConfig a = parse_config(doc);
  const RunConfig b = parse_config(ordered_json::parse(a.document.dump()));
  CHECK(a.document == b.document);
  CHECK(a.model == b.model);
  CHECK(a.seed == b.seed);
  CHECK(a.samples == b.samples);
  CHECK(a.horizon == b.horizon);
  CHECK(a.noise_sigma == b.noise_sigma);
  CHECK(a.fixed == b.fixed);
}

TEST_CASE("overrides reach nested keys, array entries, and new keys") {
  ordered_json doc = tiny_idm_doc();

  apply_override(doc, "scenario.n_lanes=1");
  CHECK(doc["scenario"]["n_lanes"] == 1);

  apply_override(doc, "inferred.0.low=2.5");
  CHECK(doc["inferred"][0]["low"] == 2.5);

  apply_override(doc, "output_dir=/tmp/somewhere");  // bare word stays a string
  CHECK(doc["output_dir"] == "/tmp/somewhere");

  apply_override(doc, "inferred=[{\"name\":\"a\",\"low\":0.5,\"high\":5.0}]");
  CHECK(doc["inferred"].size() == 1);
  CHECK(doc["inferred"][0]["name"] == "a");
  CHECK_NOTHROW(parse_config(doc));

  CHECK_THROWS_AS(apply_override(doc, "inferred.5.low=1"), ConfigError);
  CHECK_THROWS_AS(apply_override(doc, "no_equals_sign"), ConfigError);
  CHECK_THROWS_AS(apply_override(doc, "=5"), ConfigError);
  CHECK_THROWS_AS(apply_override(doc, "model.deeper=1"), ConfigError);
}

TEST_CASE("effective config applies overrides then seed and output flags") {
  const std::string dir = fresh_dir("effective");
  const ordered_json doc = tiny_idm_doc();
  const std::string path = dir + "/config.json";
  write_text_file(path, doc.dump(2) + "\n");

  CliOptions options;
  options.config_path = path;
  options.overrides = {"scenario.n_lanes=1", "samples=4"};
  options.seed = 99;
  options.seed_set = true;
  options.out_dir = dir + "/run";

  const RunConfig cfg = load_effective_config(options);
  CHECK(cfg.samples == 4);
  CHECK(cfg.seed == 99);
  CHECK(cfg.output_dir == dir + "/run");
  CHECK(cfg.document["scenario"]["n_lanes"] == 1);
  CHECK(cfg.source_text == doc.dump(2) + "\n");  // pre-override bytes

  CliOptions missing;
  missing.config_path = dir + "/nope.json";
  CHECK_THROWS_AS(load_effective_config(missing), IoError);

  write_text_file(dir + "/broken.json", "{not json");
  CliOptions broken;
  broken.config_path = dir + "/broken.json";
  CHECK_THROWS_AS(load_effective_config(broken), ConfigError);
}

TEST_CASE("observing a trajectory is seed-deterministic per step") {
  ordered_json doc = tiny_idm_doc();
  const RunConfig cfg = parse_config(doc);
  const BuiltModel built = build_model(cfg);
  const Trajectory truth = built.model->simulate(built.truth, 3);

  const ObservationSeries a = observe_trajectory(truth, 0.05, 7);
  const ObservationSeries b = observe_trajectory(truth, 0.05, 7);
  const ObservationSeries c = observe_trajectory(truth, 0.05, 8);
  REQUIRE(a.horizon() == 3);
  CHECK(a.times == truth.frame_times);
  for (int t = 0; t < 3; ++t) {
    CHECK(a.observations[t].points == b.observations[t].points);
    CHECK(a.observations[t].points != c.observations[t].points);
  }

  const ObservationSeries clean = observe_trajectory(truth, 0.0, 7);
  for (int t = 0; t < 3; ++t) CHECK(clean.observations[t].points == truth.frames[t]);
}

TEST_CASE("simulate writes a self-contained run directory") {
  const std::string dir = fresh_dir("simulate");
  ordered_json doc = tiny_idm_doc();
  doc["output_dir"] = dir;
  RunConfig cfg = parse_config(doc);
  cfg.source_text = doc.dump(2) + "\n";
  run_simulate(cfg);

  CHECK(read_text_file(dir + "/config.json") == cfg.source_text);
  const Trajectory truth = read_trajectory(dir + "/truth.csv");
  CHECK(truth.horizon() == 3);
  const ObservationSeries obs = read_observations(dir + "/observations.csv");
  CHECK(obs.horizon() == 3);
  CHECK(obs.noise_sigma == 0.05);
  CHECK(obs.times == truth.frame_times);

  const ordered_json record =
      ordered_json::parse(read_text_file(dir + "/run_record.json"));
  CHECK(record["command"] == "simulate");
  CHECK(record["model"] == "idm");
  CHECK(record["seed"] == 11);
  CHECK(record["config"] == doc);
}

TEST_CASE("infer writes trace, samples, and reruns byte-identically") {
  ordered_json doc = tiny_idm_doc();

  const std::string dir1 = fresh_dir("infer_a");
  doc["output_dir"] = dir1;
  RunConfig cfg = parse_config(doc);
  cfg.source_text = doc.dump(2) + "\n";
  run_infer(cfg, "", true);

  // 3 steps x 1 inferred parameter, plus the header.
  const std::string trace_text = read_text_file(dir1 + "/posterior_trace.csv");
  CHECK(std::count(trace_text.begin(), trace_text.end(), '\n') == 4);

  const std::vector<SnapshotFrame> samples =
      read_snapshots(dir1 + "/posterior_samples.csv");
  REQUIRE(samples.size() == 1);
  CHECK(samples[0].t == 3);
  CHECK(samples[0].thetas.rows() == 8);
  CHECK(samples[0].thetas.cols() == 1);
  CHECK(samples[0].weights.sum() == doctest::Approx(1.0));
  for (Eigen::Index j = 0; j < 8; ++j) {
    CHECK(samples[0].thetas(j, 0) >= 5.0);
    CHECK(samples[0].thetas(j, 0) <= 25.0);
  }

  const std::vector<SnapshotFrame> snaps = read_snapshots(dir1 + "/snapshots.csv");
  CHECK(snaps.size() == 3);

  const ordered_json record =
      ordered_json::parse(read_text_file(dir1 + "/run_record.json"));
  CHECK(record["command"] == "infer");

  // Same config, fresh directory: identical sampler output bytes.
  const std::string dir2 = fresh_dir("infer_b");
  ordered_json doc2 = tiny_idm_doc();
  doc2["output_dir"] = dir2;
  RunConfig cfg2 = parse_config(doc2);
  cfg2.source_text = doc2.dump(2) + "\n";
  run_infer(cfg2, "", false);
  CHECK(read_text_file(dir2 + "/posterior_trace.csv") == trace_text);
  CHECK(read_text_file(dir2 + "/posterior_samples.csv") ==
        read_text_file(dir1 + "/posterior_samples.csv"));
  CHECK(!fs::exists(dir2 + "/snapshots.csv"));
}

TEST_CASE("infer consumes an external observation table") {
  const std::string src = fresh_dir("infer_src");
  ordered_json doc = tiny_idm_doc();
  doc["output_dir"] = src;
  RunConfig cfg = parse_config(doc);
  cfg.source_text = doc.dump(2) + "\n";
  run_simulate(cfg);

  const std::string dir = fresh_dir("infer_ext");
  ordered_json doc2 = tiny_idm_doc();
  doc2["output_dir"] = dir;
  RunConfig cfg2 = parse_config(doc2);
  cfg2.source_text = doc2.dump(2) + "\n";
  run_infer(cfg2, src + "/observations.csv", false);

  CHECK(read_text_file(dir + "/observations.csv") ==
        read_text_file(src + "/observations.csv"));
  CHECK(!fs::exists(dir + "/truth.csv"));  // truth lives with the source run
  CHECK(fs::exists(dir + "/posterior_trace.csv"));

  // A shorter observation table cannot cover the configured horizon.
  ordered_json doc3 = tiny_idm_doc();
  doc3["horizon"] = 5;
  doc3["output_dir"] = fresh_dir("infer_short");
  RunConfig cfg3 = parse_config(doc3);
  cfg3.source_text = doc3.dump(2) + "\n";
  CHECK_THROWS_WITH_AS(run_infer(cfg3, src + "/observations.csv", false),
                       Contains("horizon"), ConfigError);
}

TEST_CASE("report writes density grids and the distance table") {
  const std::string dir = fresh_dir("report");
  ordered_json doc = tiny_idm_doc();
  doc["output_dir"] = dir;
  RunConfig cfg = parse_config(doc);
  cfg.source_text = doc.dump(2) + "\n";
  run_infer(cfg, "", false);

  run_report(dir, {});
  // horizon 3: default steps are 1, ceil(3/3) = 1, and 3.
  for (const int t : {1, 3}) {
    const std::string tag = "_t" + std::to_string(t) + ".csv";
    for (const std::string base :
         {"kde_truth", "kde_observed", "kde_prior_sim", "kde_posterior_sim"}) {
      const std::string path = dir + "/report/" + base + tag;
      REQUIRE_MESSAGE(fs::exists(path), path);
      const DensityGrid grid = read_density_grid(path);
      CHECK(grid.axis_counts == std::vector<int>{50, 50});
      CHECK(grid.values.allFinite());
      CHECK(grid.values.minCoeff() >= 0.0);
    }
  }
  CHECK(!fs::exists(dir + "/report/kde_truth_t2.csv"));

  const std::vector<WdComparisonRow> rows =
      read_wd_comparison(dir + "/report/wd_comparison.csv");
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].t == 1);
  CHECK(rows[1].t == 3);
  for (const auto& row : rows) {
    CHECK(std::isfinite(row.wd0));
    CHECK(row.wd0 >= 0.0);
    CHECK(std::isfinite(row.wd1));
    CHECK(std::isfinite(row.wd2));
  }

  // Explicit steps replace the default selection; out-of-range steps fail.
  run_report(dir, {2});
  CHECK(fs::exists(dir + "/report/kde_truth_t2.csv"));
  CHECK_THROWS_WITH_AS(run_report(dir, {9}), Contains("steps"), ConfigError);
}

TEST_CASE("ingest normalizes an external table into a run directory") {
  const std::string src = fresh_dir("ingest_src");
  write_observations(src + "/raw.csv", sample_observations());

  const std::string dir = fresh_dir("ingest_out");
  run_ingest(src + "/raw.csv", dir, 0.5);
  const ObservationSeries back = read_observations(dir + "/observations.csv");
  CHECK(back.horizon() == 2);
  CHECK(back.noise_sigma == 0.5);  // override wins over the sidecar

  run_ingest(src + "/raw.csv", dir, -1.0);
  CHECK(read_observations(dir + "/observations.csv").noise_sigma == 0.25);

  CHECK_THROWS_AS(run_ingest(src + "/nope.csv", dir, -1.0), IoError);
}

TEST_CASE("crowd-model configs run through the same pipeline") {
  const std::string dir = fresh_dir("sfm_pipeline");
  ordered_json doc;
  doc["model"] = "sfm";
  doc["seed"] = 5;
  doc["samples"] = 4;
  doc["horizon"] = 2;
  doc["noise_sigma"] = 0.02;
  doc["output_dir"] = dir;
  doc["inferred"] = ordered_json::array(
      {{{"name", "v_p"}, {"low", 0.0}, {"high", 1.5}}});
  doc["fixed"] = {{"A", 2000.0}, {"B", 0.08}, {"v_p", 1.0}};
  doc["scenario"] = {{"room_size", 6.0},
                     {"n_pedestrians", 4},
                     {"dt", 0.01},
                     {"frame_spacing", 0.05}};
  RunConfig cfg = parse_config(doc);
  cfg.source_text = doc.dump(2) + "\n";

  run_infer(cfg, "", false);
  const Trajectory truth = read_trajectory(dir + "/truth.csv");
  CHECK(truth.horizon() == 2);
  CHECK(truth.frames[0].rows() == 4);
  const std::vector<SnapshotFrame> samples =
      read_snapshots(dir + "/posterior_samples.csv");
  REQUIRE(samples.size() == 1);
  CHECK(samples[0].thetas.rows() == 4);

  run_report(dir, {2});
  CHECK(fs::exists(dir + "/report/wd_comparison.csv"));
}

}  // TEST_SUITE
