#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "wdsmc/model.hpp"

namespace wdsmc::sfm {

// Pedestrian dynamics parameters. Calibration targets are the repulsion
// strength A, repulsion range B, and preferred speed v_p; the rest stay at
// their configured values.
struct SfmParams {
  double mass = 80.0;             // m [kg]
  double desired_speed = 1.0;     // v_p [m/s]
  double accel_time = 0.5;        // tau [s]
  double radius = 0.3;            // r [m]
  double strength = 2000.0;       // A [N]
  double range = 0.08;            // B [m]
  double body_stiffness = 1.2e5;  // k [kg/s^2]
  double sliding_friction = 2.4e5;  // kappa [kg/(m s)]

  // Overlay of named values {"A", "B", "v_p"} onto this table.
  SfmParams with(const ParameterVector& theta) const;
};

struct PedestrianState {
  Eigen::Vector2d position = Eigen::Vector2d::Zero();
  Eigen::Vector2d velocity = Eigen::Vector2d::Zero();
  bool active = true;
};

struct Segment {
  Eigen::Vector2d a;
  Eigen::Vector2d b;
};

Eigen::Vector2d closest_point_on_segment(const Segment& seg, const Eigen::Vector2d& p);

// Square room with one exit gap centered on a boundary edge. Walls are the
// boundary minus the gap; pedestrians deactivate when their motion crosses
// the gap segment.
struct RoomScenario {
  double room_size = 10.0;
  Eigen::Vector2d exit_center{10.0, 5.0};
  double exit_width = 2.0;
  int n_pedestrians = 100;
  std::uint64_t placement_seed = 4;
  double dt = 0.001;
  double frame_spacing = 0.1;  // observation interval

  std::vector<Segment> walls;
  Segment exit_gap{{10.0, 4.0}, {10.0, 6.0}};

  // Builds walls/exit_gap from the scalar fields above. The exit center must
  // lie on one of the four boundary edges.
  static RoomScenario make(double room_size, const Eigen::Vector2d& exit_center,
                           double exit_width, int n_pedestrians, std::uint64_t placement_seed,
                           double dt, double frame_spacing);
};

// m (v_p e - v) / tau toward the target point.
Eigen::Vector2d desire_force(const PedestrianState& state, const SfmParams& params,
                             const Eigen::Vector2d& target);

// Repulsion + body force + sliding friction exerted on i by j. Contact terms
// switch on only when the disks overlap (2r > distance).
Eigen::Vector2d pair_force(const PedestrianState& si, const PedestrianState& sj,
                           const SfmParams& params);

// Same structure against the nearest point of a wall segment.
Eigen::Vector2d wall_force(const PedestrianState& state, const Segment& wall,
                           const SfmParams& params);

// One semi-implicit Euler step (v first, then position); pedestrians whose
// displacement crosses the exit gap become inactive. Inactive entries keep
// their slot so identities are stable across frames.
std::vector<PedestrianState> step(const std::vector<PedestrianState>& states,
                                  const SfmParams& params, const RoomScenario& scenario,
                                  double dt);

// Uniform rejection sampling: pairwise clearance 2r, wall clearance r.
// Throws PlacementFailureError after 1e5 failed attempts for one slot.
std::vector<PedestrianState> place_pedestrians(const RoomScenario& scenario);

// T frames at frame_spacing intervals; frame t holds the active pedestrians'
// positions after t * (frame_spacing / dt) integration steps.
Trajectory simulate_room(const ParameterVector& theta, const RoomScenario& scenario,
                         const SfmParams& fixed, int horizon);

class SfmModel : public ForwardModel {
 public:
  SfmModel(RoomScenario scenario, SfmParams fixed);

  std::vector<std::string> parameter_names() const override;
  std::unique_ptr<Session> make_session(const ParameterVector& theta) const override;
  Box bounds() const override;
  double speed_cap() const override { return 10.0; }
  double frame_spacing() const override { return scenario_.frame_spacing; }

  const RoomScenario& scenario() const { return scenario_; }
  const SfmParams& fixed_params() const { return fixed_; }

 private:
  RoomScenario scenario_;
  SfmParams fixed_;
  std::vector<PedestrianState> initial_states_;  // placement shared by all sessions
};

}  // namespace wdsmc::sfm
