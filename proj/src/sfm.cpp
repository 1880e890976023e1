#include "wdsmc/sfm.hpp"

#include <cmath>

#include "wdsmc/errors.hpp"

namespace wdsmc::sfm {

namespace {

inline double positive_part(double x) { return x > 0.0 ? x : 0.0; }

inline Eigen::Vector2d rotate90(const Eigen::Vector2d& n) {
  return Eigen::Vector2d(-n[1], n[0]);
}

}  // namespace

SfmParams SfmParams::with(const ParameterVector& theta) const {
  SfmParams out = *this;
  out.strength = theta.get_or("A", out.strength);
  out.range = theta.get_or("B", out.range);
  out.desired_speed = theta.get_or("v_p", out.desired_speed);
  return out;
}

Eigen::Vector2d closest_point_on_segment(const Segment& seg, const Eigen::Vector2d& p) {
  const Eigen::Vector2d d = seg.b - seg.a;
  const double len2 = d.squaredNorm();
  if (len2 == 0.0) return seg.a;
  double s = (p - seg.a).dot(d) / len2;
  s = std::clamp(s, 0.0, 1.0);
  return seg.a + s * d;
}

RoomScenario RoomScenario::make(double room_size, const Eigen::Vector2d& exit_center,
                                double exit_width, int n_pedestrians,
                                std::uint64_t placement_seed, double dt, double frame_spacing) {
  if (!(room_size > 0.0) || !(exit_width > 0.0) || !(dt > 0.0) || !(frame_spacing > 0.0))
    throw InvalidSpecError("room scenario needs positive geometry and step sizes");
  if (n_pedestrians < 1) throw InvalidSpecError("need at least one pedestrian");
  const double steps = frame_spacing / dt;
  if (std::abs(steps - std::round(steps)) > 1e-12 * steps)
    throw InvalidSpecError("dt must divide the frame spacing");

  RoomScenario sc;
  sc.room_size = room_size;
  sc.exit_center = exit_center;
  sc.exit_width = exit_width;
  sc.n_pedestrians = n_pedestrians;
  sc.placement_seed = placement_seed;
  sc.dt = dt;
  sc.frame_spacing = frame_spacing;

  const double L = room_size;
  const double half = exit_width / 2.0;
  const double eps = 1e-9 * std::max(1.0, L);
  sc.walls.clear();

  // One edge carries the gap; the other three stay solid.
  auto add_edge = [&](const Eigen::Vector2d& a, const Eigen::Vector2d& b, bool has_exit) {
    if (!has_exit) {
      sc.walls.push_back({a, b});
      return;
    }
    const Eigen::Vector2d dir = (b - a).normalized();
    const double along = (exit_center - a).dot(dir);
    const double lo = std::max(0.0, along - half);
    const double hi = std::min(L, along + half);
    if (lo > 0.0) sc.walls.push_back({a, a + lo * dir});
    if (hi < L) sc.walls.push_back({a + hi * dir, b});
    sc.exit_gap = {a + lo * dir, a + hi * dir};
  };

  const bool on_bottom = std::abs(exit_center[1]) < eps;
  const bool on_right = std::abs(exit_center[0] - L) < eps;
  const bool on_top = std::abs(exit_center[1] - L) < eps;
  const bool on_left = std::abs(exit_center[0]) < eps;
  if (!(on_bottom || on_right || on_top || on_left))
    throw InvalidSpecError("exit center must lie on a boundary edge");

  add_edge({0.0, 0.0}, {L, 0.0}, on_bottom);
  add_edge({L, 0.0}, {L, L}, on_right && !on_bottom);
  add_edge({0.0, L}, {L, L}, on_top && !on_right && !on_bottom);
  add_edge({0.0, 0.0}, {0.0, L}, on_left && !on_top && !on_right && !on_bottom);
  return sc;
}

Eigen::Vector2d desire_force(const PedestrianState& state, const SfmParams& params,
                             const Eigen::Vector2d& target) {
  const Eigen::Vector2d to_target = target - state.position;
  const double dist = to_target.norm();
  const Eigen::Vector2d e = dist > 0.0 ? Eigen::Vector2d(to_target / dist)
                                       : Eigen::Vector2d::Zero();
  return params.mass * (params.desired_speed * e - state.velocity) / params.accel_time;
}

Eigen::Vector2d pair_force(const PedestrianState& si, const PedestrianState& sj,
                           const SfmParams& params) {
  const Eigen::Vector2d diff = si.position - sj.position;
  const double dist = diff.norm();
  if (dist <= 0.0) return Eigen::Vector2d::Zero();  // coincident centers: direction undefined
  const Eigen::Vector2d n = diff / dist;
  const double sum_radii = 2.0 * params.radius;
  const double overlap = positive_part(sum_radii - dist);
  const double repulsion = params.strength * std::exp((sum_radii - dist) / params.range);

  Eigen::Vector2d force = (repulsion + params.body_stiffness * overlap) * n;
  if (overlap > 0.0) {
    const Eigen::Vector2d t = rotate90(n);
    const double tangential_dv = (sj.velocity - si.velocity).dot(t);
    force += params.sliding_friction * overlap * tangential_dv * t;
  }
  return force;
}

Eigen::Vector2d wall_force(const PedestrianState& state, const Segment& wall,
                           const SfmParams& params) {
  const Eigen::Vector2d nearest = closest_point_on_segment(wall, state.position);
  const Eigen::Vector2d diff = state.position - nearest;
  const double dist = diff.norm();
  if (dist <= 0.0) return Eigen::Vector2d::Zero();
  const Eigen::Vector2d n = diff / dist;
  const double overlap = positive_part(params.radius - dist);
  const double repulsion = params.strength * std::exp((params.radius - dist) / params.range);

  Eigen::Vector2d force = (repulsion + params.body_stiffness * overlap) * n;
  if (overlap > 0.0) {
    const Eigen::Vector2d t = rotate90(n);
    force -= params.sliding_friction * overlap * (state.velocity.dot(t)) * t;
  }
  return force;
}

namespace {

bool crosses_exit(const Segment& gap, const Eigen::Vector2d& from, const Eigen::Vector2d& to) {
  const Eigen::Vector2d d = gap.b - gap.a;
  const Eigen::Vector2d n(-d[1], d[0]);
  const double s_from = (from - gap.a).dot(n);
  const double s_to = (to - gap.a).dot(n);
  if (s_from == s_to) return false;
  if ((s_from > 0.0 && s_to > 0.0) || (s_from < 0.0 && s_to < 0.0)) return false;
  const double alpha = s_from / (s_from - s_to);
  const Eigen::Vector2d hit = from + alpha * (to - from);
  const double beta = (hit - gap.a).dot(d) / d.squaredNorm();
  return beta >= 0.0 && beta <= 1.0;
}

void step_in_place(std::vector<PedestrianState>& states, const SfmParams& params,
                   const RoomScenario& scenario, double dt,
                   std::vector<Eigen::Vector2d>& force_buffer) {
  const std::size_t n = states.size();
  force_buffer.assign(n, Eigen::Vector2d::Zero());

  for (std::size_t i = 0; i < n; ++i) {
    if (!states[i].active) continue;
    Eigen::Vector2d f = desire_force(states[i], params, scenario.exit_center);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i || !states[j].active) continue;
      f += pair_force(states[i], states[j], params);
    }
    for (const Segment& wall : scenario.walls) f += wall_force(states[i], wall, params);
    force_buffer[i] = f;
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (!states[i].active) continue;
    const Eigen::Vector2d old_pos = states[i].position;
    states[i].velocity += force_buffer[i] * (dt / params.mass);
    states[i].position += states[i].velocity * dt;
    if (crosses_exit(scenario.exit_gap, old_pos, states[i].position)) states[i].active = false;
  }
}

}  // namespace

std::vector<PedestrianState> step(const std::vector<PedestrianState>& states,
                                  const SfmParams& params, const RoomScenario& scenario,
                                  double dt) {
  std::vector<PedestrianState> out = states;
  std::vector<Eigen::Vector2d> forces;
  step_in_place(out, params, scenario, dt, forces);
  return out;
}

std::vector<PedestrianState> place_pedestrians(const RoomScenario& scenario) {
  Rng rng = substream(scenario.placement_seed, {kStreamPlacement});
  std::vector<PedestrianState> states;
  states.reserve(static_cast<std::size_t>(scenario.n_pedestrians));
  const double r = SfmParams{}.radius;
  const double L = scenario.room_size;

  for (int i = 0; i < scenario.n_pedestrians; ++i) {
    bool placed = false;
    for (long attempt = 0; attempt < 100000; ++attempt) {
      Eigen::Vector2d cand(rng.uniform(0.0, L), rng.uniform(0.0, L));
      bool ok = true;
      for (const Segment& wall : scenario.walls) {
        if ((cand - closest_point_on_segment(wall, cand)).norm() <= r) {
          ok = false;
          break;
        }
      }
      if (ok) {
        for (const PedestrianState& other : states) {
          if ((cand - other.position).norm() <= 2.0 * r) {
            ok = false;
            break;
          }
        }
      }
      if (ok) {
        PedestrianState s;
        s.position = cand;
        states.push_back(s);
        placed = true;
        break;
      }
    }
    if (!placed)
      throw PlacementFailureError("could not place pedestrian without overlap");
  }
  return states;
}

namespace {

class SfmSession : public Session {
 public:
  SfmSession(std::vector<PedestrianState> states, SfmParams params, RoomScenario scenario)
      : states_(std::move(states)), params_(params), scenario_(std::move(scenario)) {
    steps_per_frame_ = static_cast<long>(std::llround(scenario_.frame_spacing / scenario_.dt));
  }

  Eigen::MatrixXd advance() override {
    for (long s = 0; s < steps_per_frame_; ++s)
      step_in_place(states_, params_, scenario_, scenario_.dt, forces_);
    long active = 0;
    for (const auto& st : states_)
      if (st.active) ++active;
    Eigen::MatrixXd frame(active, 2);
    long row = 0;
    for (const auto& st : states_)
      if (st.active) frame.row(row++) = st.position.transpose();
    return frame;
  }

  std::unique_ptr<Session> clone() const override {
    return std::make_unique<SfmSession>(*this);
  }

 private:
  std::vector<PedestrianState> states_;
  SfmParams params_;
  RoomScenario scenario_;
  long steps_per_frame_ = 1;
  std::vector<Eigen::Vector2d> forces_;
};

}  // namespace

Trajectory simulate_room(const ParameterVector& theta, const RoomScenario& scenario,
                         const SfmParams& fixed, int horizon) {
  SfmModel model(scenario, fixed);
  return model.simulate(theta, horizon);
}

SfmModel::SfmModel(RoomScenario scenario, SfmParams fixed)
    : scenario_(std::move(scenario)), fixed_(fixed) {
  if (scenario_.walls.empty()) {
    // Scalar-initialized scenario: derive walls from the box fields.
    scenario_ = RoomScenario::make(scenario_.room_size, scenario_.exit_center,
                                   scenario_.exit_width, scenario_.n_pedestrians,
                                   scenario_.placement_seed, scenario_.dt,
                                   scenario_.frame_spacing);
  }
  initial_states_ = place_pedestrians(scenario_);
}

std::vector<std::string> SfmModel::parameter_names() const { return {"A", "B", "v_p"}; }

std::unique_ptr<Session> SfmModel::make_session(const ParameterVector& theta) const {
  for (const auto& name : theta.names) {
    if (name != "A" && name != "B" && name != "v_p")
      throw InvalidSpecError("pedestrian model cannot calibrate parameter: " + name);
  }
  return std::make_unique<SfmSession>(initial_states_, fixed_.with(theta), scenario_);
}

Box SfmModel::bounds() const {
  Box box;
  box.lo = Eigen::Vector2d::Zero();
  box.hi = Eigen::Vector2d::Constant(2, scenario_.room_size);
  return box;
}

}  // namespace wdsmc::sfm
