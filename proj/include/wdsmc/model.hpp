#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wdsmc/distribution.hpp"
#include "wdsmc/random.hpp"

namespace wdsmc {

// Named parameter values; order is fixed by the experiment configuration.
struct ParameterVector {
  std::vector<std::string> names;
  Eigen::VectorXd values;

  ParameterVector() = default;
  ParameterVector(std::vector<std::string> n, Eigen::VectorXd v);

  Eigen::Index size() const { return values.size(); }
  bool has(const std::string& name) const;
  double get(const std::string& name) const;  // throws IndexOutOfRangeError
  double get_or(const std::string& name, double fallback) const;
};

// Point-cloud frames at uniformly spaced observation times; counts may vary
// between frames as agents enter or leave the scene.
struct Trajectory {
  std::vector<Eigen::MatrixXd> frames;  // frame t (1-based) at frames[t-1]
  std::vector<double> frame_times;

  int horizon() const { return static_cast<int>(frames.size()); }
};

// Observed per-step clouds plus the metadata needed to reproduce them.
struct ObservationSeries {
  std::vector<DiscreteDistribution> observations;
  std::vector<double> times;
  double noise_sigma = 0.0;

  int horizon() const { return static_cast<int>(observations.size()); }
  int dimension() const {
    return observations.empty() ? 0 : static_cast<int>(observations.front().dimension());
  }
};

// Axis-aligned spatial box.
struct Box {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;

  bool contains(const Eigen::RowVectorXd& p, double pad) const {
    for (Eigen::Index k = 0; k < lo.size(); ++k)
      if (p[k] < lo[k] - pad || p[k] > hi[k] + pad) return false;
    return true;
  }
};

// Incremental simulation handle. advance() produces the next frame;
// sessions are value-cloneable so resampled ensemble members can share a
// past and diverge later. Sessions are deterministic in their inputs.
class Session {
 public:
  virtual ~Session() = default;
  virtual Eigen::MatrixXd advance() = 0;  // next frame's point cloud
  virtual std::unique_ptr<Session> clone() const = 0;
};

// Deterministic map from parameters to a trajectory. Implementations expose
// their observable bounds, frame spacing, and a physical speed cap used by
// trajectory validation.
class ForwardModel {
 public:
  virtual ~ForwardModel() = default;
  virtual std::vector<std::string> parameter_names() const = 0;
  virtual std::unique_ptr<Session> make_session(const ParameterVector& theta) const = 0;
  virtual Box bounds() const = 0;
  virtual double speed_cap() const = 0;
  virtual double frame_spacing() const = 0;

  // Full-horizon simulation: run a fresh session T frames. Simulating to
  // horizon T and truncating equals simulating to any shorter horizon.
  Trajectory simulate(const ParameterVector& theta, int horizon) const;
};

// Adds iid N(0, sigma^2) noise per coordinate; equal atom masses.
DiscreteDistribution observe(const Eigen::MatrixXd& frame, double sigma, Rng& rng);

// Noise-free observation of frame t (1-based). Throws IndexOutOfRangeError.
DiscreteDistribution synthetic_observation(const Trajectory& trajectory, int t);

struct ValidationResult {
  bool ok = true;
  std::string reason;
  int frame = 0;  // 1-based frame where validation failed

  static ValidationResult good() { return {}; }
  static ValidationResult bad(std::string why, int at) { return {false, std::move(why), at}; }
};

// Degeneracy screen: non-finite coordinates, positions outside bounds plus
// 1 m padding, or index-paired inter-frame displacement implying speed above
// speed_cap. The displacement check applies only between consecutive frames
// of equal point count (entry/exit transitions carry no index pairing).
ValidationResult validate_trajectory(const Trajectory& trajectory, double speed_cap,
                                     const Box& bounds);

// Same checks for a single new frame given its predecessor (or none).
ValidationResult validate_frame(const Eigen::MatrixXd& frame,
                                const Eigen::MatrixXd* previous, int frame_index,
                                double speed_cap, double frame_spacing, const Box& bounds);

}  // namespace wdsmc
