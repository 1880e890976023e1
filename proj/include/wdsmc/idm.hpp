#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "wdsmc/model.hpp"

namespace wdsmc::idm {

// Car-following parameters. Calibration targets are the free speed v0, the
// maximum acceleration a, and the time headway T_s.
struct IdmParams {
  double free_speed = 8.33;       // v0 [m/s]
  double time_headway = 1.6;      // T_s [s]
  double max_accel = 1.44;        // a [m/s^2]
  double comfort_decel = 4.61;    // b [m/s^2]
  double accel_exponent = 4.0;    // delta
  double min_gap = 2.0;           // s0 [m]
  double vehicle_length = 5.0;    // l [m]

  // Overlay of named values {"v0", "a", "T_s"} onto this table.
  IdmParams with(const ParameterVector& theta) const;
};

struct VehicleState {
  int lane = 0;
  double position = 0.0;  // front-bumper coordinate along the lane
  double velocity = 0.0;
};

// s* = s0 + T_s v + v dv / (2 sqrt(a b)), clamped below at s0.
double desired_gap(double v, double dv, const IdmParams& params);

// dv/dt for a follower, free-road if leader is null. Throws
// NonPositiveGapError when the net gap to the leader is <= 0.
double acceleration(const VehicleState& follower, const VehicleState* leader,
                    const IdmParams& params);

// One integration step for every lane: accelerations from the pre-step
// snapshot, then v <- max(0, v + accel dt), x <- x + v dt, front to back.
// Vehicles passing lane_length are removed.
std::vector<std::vector<VehicleState>> step(
    const std::vector<std::vector<VehicleState>>& lanes, const IdmParams& params, double dt,
    double lane_length);

// Multi-lane open road fed by a jittered arrival schedule. Vehicle k's
// nominal entry is k / arrival_rate plus U(-jitter, jitter) noise, lane
// k mod n_lanes; an entry is deferred while the rear gap is below s0.
struct HighwayScenario {
  double lane_length = 300.0;
  int n_lanes = 4;
  double arrival_rate = 3.0;  // vehicles per second, all lanes combined
  std::uint64_t arrival_seed = 7;
  double entry_speed = 6.664;  // 0.8 * default free speed
  double entry_jitter = 0.05;
  double lane_spacing = 3.5;
  double dt = 0.1;
  double frame_spacing = 1.0;
};

struct ArrivalEvent {
  double time = 0.0;
  int lane = 0;
};

// Event k of the shared schedule (independent of the calibrated parameters).
ArrivalEvent arrival_event(const HighwayScenario& scenario, long k);

// T frames at frame_spacing intervals; frames hold (x, lane * lane_spacing)
// rows, lanes concatenated in order, front-to-back inside a lane. Collisions
// surface as DegenerateTrajectoryError.
Trajectory simulate_highway(const ParameterVector& theta, const HighwayScenario& scenario,
                            const IdmParams& fixed, int horizon);

class IdmModel : public ForwardModel {
 public:
  IdmModel(HighwayScenario scenario, IdmParams fixed);

  std::vector<std::string> parameter_names() const override;
  std::unique_ptr<Session> make_session(const ParameterVector& theta) const override;
  Box bounds() const override;
  double speed_cap() const override { return 60.0; }
  double frame_spacing() const override { return scenario_.frame_spacing; }

  const HighwayScenario& scenario() const { return scenario_; }
  const IdmParams& fixed_params() const { return fixed_; }

 private:
  HighwayScenario scenario_;
  IdmParams fixed_;
};

}  // namespace wdsmc::idm
