#include "wdsmc/idm.hpp"

#include <cmath>
#include <deque>

#include "wdsmc/errors.hpp"

namespace wdsmc::idm {

IdmParams IdmParams::with(const ParameterVector& theta) const {
  IdmParams out = *this;
  out.free_speed = theta.get_or("v0", out.free_speed);
  out.max_accel = theta.get_or("a", out.max_accel);
  out.time_headway = theta.get_or("T_s", out.time_headway);
  return out;
}

double desired_gap(double v, double dv, const IdmParams& params) {
  const double dynamic =
      params.time_headway * v + v * dv / (2.0 * std::sqrt(params.max_accel * params.comfort_decel));
  return params.min_gap + std::max(0.0, dynamic);
}

double acceleration(const VehicleState& follower, const VehicleState* leader,
                    const IdmParams& params) {
  const double free_term =
      1.0 - std::pow(follower.velocity / params.free_speed, params.accel_exponent);
  if (leader == nullptr) return params.max_accel * free_term;

  const double gap = leader->position - follower.position - params.vehicle_length;
  if (gap <= 0.0) throw NonPositiveGapError("follower has no headway left");
  const double dv = follower.velocity - leader->velocity;
  const double sstar = desired_gap(follower.velocity, dv, params);
  return params.max_accel * (free_term - (sstar / gap) * (sstar / gap));
}

std::vector<std::vector<VehicleState>> step(
    const std::vector<std::vector<VehicleState>>& lanes, const IdmParams& params, double dt,
    double lane_length) {
  std::vector<std::vector<VehicleState>> out(lanes.size());
  std::vector<double> accel;
  for (std::size_t lane = 0; lane < lanes.size(); ++lane) {
    const auto& cars = lanes[lane];
    accel.assign(cars.size(), 0.0);
    for (std::size_t i = 0; i < cars.size(); ++i)
      accel[i] = acceleration(cars[i], i == 0 ? nullptr : &cars[i - 1], params);

    out[lane].reserve(cars.size());
    for (std::size_t i = 0; i < cars.size(); ++i) {
      VehicleState next = cars[i];
      next.velocity = std::max(0.0, next.velocity + accel[i] * dt);
      next.position += next.velocity * dt;
      if (next.position <= lane_length) out[lane].push_back(next);
    }
  }
  return out;
}

ArrivalEvent arrival_event(const HighwayScenario& scenario, long k) {
  Rng rng = substream(scenario.arrival_seed, {kStreamArrival, static_cast<std::uint64_t>(k)});
  const double nominal = static_cast<double>(k) / scenario.arrival_rate;
  const double jitter = rng.uniform(-scenario.entry_jitter, scenario.entry_jitter);
  ArrivalEvent ev;
  ev.time = std::max(0.0, nominal + jitter);
  ev.lane = static_cast<int>(k % scenario.n_lanes);
  return ev;
}

namespace {

class IdmSession : public Session {
 public:
  IdmSession(IdmParams params, HighwayScenario scenario)
      : params_(params), scenario_(std::move(scenario)) {
    if (scenario_.n_lanes < 1) throw InvalidSpecError("need at least one lane");
    const double steps = scenario_.frame_spacing / scenario_.dt;
    if (std::abs(steps - std::round(steps)) > 1e-12 * steps)
      throw InvalidSpecError("dt must divide the frame spacing");
    steps_per_frame_ = static_cast<long>(std::llround(steps));
    lanes_.resize(static_cast<std::size_t>(scenario_.n_lanes));
    pending_.resize(static_cast<std::size_t>(scenario_.n_lanes));
  }

  Eigen::MatrixXd advance() override {
    for (long s = 0; s < steps_per_frame_; ++s) {
      admit_arrivals();
      try {
        lanes_ = step(lanes_, params_, scenario_.dt, scenario_.lane_length);
      } catch (const NonPositiveGapError& err) {
        throw DegenerateTrajectoryError(err.what());
      }
      ++tick_;
    }
    long total = 0;
    for (const auto& lane : lanes_) total += static_cast<long>(lane.size());
    Eigen::MatrixXd frame(total, 2);
    long row = 0;
    for (const auto& lane : lanes_) {
      for (const auto& car : lane) {
        frame(row, 0) = car.position;
        frame(row, 1) = car.lane * scenario_.lane_spacing;
        ++row;
      }
    }
    return frame;
  }

  std::unique_ptr<Session> clone() const override { return std::make_unique<IdmSession>(*this); }

 private:
  void admit_arrivals() {
    const double now = tick_ * scenario_.dt;
    if (!next_event_ready_) {
      next_event_ = arrival_event(scenario_, next_arrival_);
      next_event_ready_ = true;
    }
    while (next_event_.time <= now) {
      pending_[static_cast<std::size_t>(next_event_.lane)].push_back(next_event_);
      ++next_arrival_;
      next_event_ = arrival_event(scenario_, next_arrival_);
    }
    for (std::size_t lane = 0; lane < pending_.size(); ++lane) {
      while (!pending_[lane].empty()) {
        auto& cars = lanes_[lane];
        // Rear gap when entering at x = 0 must be at least s0.
        const bool clear =
            cars.empty() ||
            cars.back().position - params_.vehicle_length >= params_.min_gap;
        if (!clear) break;
        VehicleState car;
        car.lane = static_cast<int>(lane);
        car.position = 0.0;
        car.velocity = scenario_.entry_speed;
        cars.push_back(car);
        pending_[lane].pop_front();
      }
    }
  }

  IdmParams params_;
  HighwayScenario scenario_;
  long steps_per_frame_ = 1;
  long tick_ = 0;
  long next_arrival_ = 0;
  ArrivalEvent next_event_;
  bool next_event_ready_ = false;
  std::vector<std::vector<VehicleState>> lanes_;
  std::vector<std::deque<ArrivalEvent>> pending_;
};

}  // namespace

Trajectory simulate_highway(const ParameterVector& theta, const HighwayScenario& scenario,
                            const IdmParams& fixed, int horizon) {
  IdmModel model(scenario, fixed);
  return model.simulate(theta, horizon);
}

IdmModel::IdmModel(HighwayScenario scenario, IdmParams fixed)
    : scenario_(std::move(scenario)), fixed_(fixed) {}

std::vector<std::string> IdmModel::parameter_names() const { return {"v0", "a", "T_s"}; }

std::unique_ptr<Session> IdmModel::make_session(const ParameterVector& theta) const {
  for (const auto& name : theta.names) {
    if (name != "v0" && name != "a" && name != "T_s")
      throw InvalidSpecError("car-following model cannot calibrate parameter: " + name);
  }
  return std::make_unique<IdmSession>(fixed_.with(theta), scenario_);
}

Box IdmModel::bounds() const {
  Box box;
  box.lo = Eigen::Vector2d::Zero();
  box.hi = Eigen::Vector2d(scenario_.lane_length,
                           (scenario_.n_lanes - 1) * scenario_.lane_spacing);
  return box;
}

}  // namespace wdsmc::idm
