#pragma once

// File formats. All floating-point values are printed with %.17g so a
// round trip through text reproduces the exact bits, and rerunning a
// seeded pipeline reproduces files byte for byte.

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "wdsmc/density.hpp"
#include "wdsmc/model.hpp"
#include "wdsmc/smcs.hpp"

namespace wdsmc {

// Shortest representation that parses back to the same double.
std::string format_double(double value);

std::string read_text_file(const std::string& path);   // throws IoError
void write_text_file(const std::string& path, const std::string& content);

// Point-cloud series CSV: header "t,x1,...,xd", one row per point, steps
// 1-based and ascending. A ".meta.json" sidecar next to the CSV carries
// {"times", "noise_sigma", "dimension"}; reading without a sidecar falls
// back to unit-spaced times and zero noise.
void write_observations(const std::string& csv_path, const ObservationSeries& obs);
ObservationSeries read_observations(const std::string& csv_path);

// Same table layout for simulated trajectories (sidecar: times only).
void write_trajectory(const std::string& csv_path, const Trajectory& trajectory);
Trajectory read_trajectory(const std::string& csv_path);

// Posterior summary, one row per parameter per step, flushed after each
// step so interrupted runs keep their completed prefix:
// t,param,mean,std,ess,h,accept_rate,resampled
class PosteriorTraceWriter {
 public:
  PosteriorTraceWriter(const std::string& path, std::vector<std::string> param_names);
  void append(const StepRecord& record);

 private:
  std::string path_;
  std::vector<std::string> names_;
};

void write_posterior_trace(const std::string& path, const PosteriorTrace& trace,
                           const std::vector<std::string>& param_names);

// Weighted ensemble rows: t,sample_index,weight,<params>.
class SnapshotWriter {
 public:
  SnapshotWriter(const std::string& path, std::vector<std::string> param_names);
  void append(int t, const Eigen::MatrixXd& thetas, const Eigen::VectorXd& weights);

 private:
  std::string path_;
  std::vector<std::string> names_;
};

struct SnapshotFrame {
  int t = 0;
  Eigen::MatrixXd thetas;
  Eigen::VectorXd weights;
};

// Grouped by step, in file order.
std::vector<SnapshotFrame> read_snapshots(const std::string& path,
                                          std::vector<std::string>* param_names = nullptr);

// Density on a grid: a "# origin=... cell_size=... shape=..." comment line,
// a header of index columns plus "value", then row-major cells.
void write_density_grid(const std::string& path, const DensityGrid& grid);
DensityGrid read_density_grid(const std::string& path);

// Per-step distances between observation and reference simulations:
// t,wd0,wd1,wd2.
struct WdComparisonRow {
  int t = 0;
  double wd0 = 0.0;  // observed cloud vs noiseless truth
  double wd1 = 0.0;  // observed cloud vs prior-center simulation
  double wd2 = 0.0;  // observed cloud vs posterior-mean simulation
};

void write_wd_comparison(const std::string& path, const std::vector<WdComparisonRow>& rows);
std::vector<WdComparisonRow> read_wd_comparison(const std::string& path);

}  // namespace wdsmc
