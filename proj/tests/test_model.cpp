#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "wdsmc/errors.hpp"
#include "wdsmc/model.hpp"
#include "wdsmc/random.hpp"

using namespace wdsmc;

TEST_SUITE("model") {

TEST_CASE("parameter vector lookup") {
  ParameterVector pv({"a", "b"}, Eigen::Vector2d(1.5, -2.0));
  CHECK(pv.has("a"));
  CHECK_FALSE(pv.has("c"));
  CHECK(pv.get("b") == -2.0);
  CHECK(pv.get_or("c", 7.0) == 7.0);
  CHECK(pv.get_or("a", 7.0) == 1.5);
  CHECK_THROWS_AS((void)pv.get("zz"), IndexOutOfRangeError);
  CHECK_THROWS_AS(ParameterVector({"a"}, Eigen::Vector2d(1.0, 2.0)), DimensionMismatchError);
}

TEST_CASE("noisy observation of a frame") {
  Eigen::MatrixXd frame(3, 2);
  frame << 0, 0, 1, 2, -1, 4;

  Rng rng = substream(3, {1, 0, kStreamObserve});
  DiscreteDistribution clean = observe(frame, 0.0, rng);
  CHECK(clean.points == frame);
  CHECK(clean.masses.sum() == doctest::Approx(1.0).epsilon(1e-15));

  Rng r1 = substream(3, {2, 0, kStreamObserve});
  Rng r2 = substream(3, {2, 0, kStreamObserve});
  CHECK(observe(frame, 0.5, r1).points == observe(frame, 0.5, r2).points);

  // Perturbation moments over many draws.
  double sum = 0.0, sq = 0.0;
  const int reps = 4000;
  Rng rm = substream(3, {3, 0, kStreamObserve});
  for (int k = 0; k < reps; ++k) {
    DiscreteDistribution noisy = observe(frame, 0.25, rm);
    Eigen::MatrixXd delta = noisy.points - frame;
    sum += delta.sum();
    sq += delta.array().square().sum();
  }
  const int ncoord = reps * 6;
  const double mean = sum / ncoord;
  const double sd = std::sqrt(sq / ncoord - mean * mean);
  CHECK(std::abs(mean) < 0.01);
  CHECK(sd == doctest::Approx(0.25).epsilon(0.03));
}

TEST_CASE("noise-free series extraction") {
  Trajectory traj;
  traj.frames.push_back(Eigen::MatrixXd::Constant(2, 2, 1.0));
  traj.frames.push_back(Eigen::MatrixXd::Constant(2, 2, 5.0));
  traj.frame_times = {0.1, 0.2};
  CHECK(synthetic_observation(traj, 1).points(0, 0) == 1.0);
  CHECK(synthetic_observation(traj, 2).points(0, 0) == 5.0);
  CHECK_THROWS_AS((void)synthetic_observation(traj, 0), IndexOutOfRangeError);
  CHECK_THROWS_AS((void)synthetic_observation(traj, 3), IndexOutOfRangeError);
}

TEST_CASE("trajectory screen") {
  Box box;
  box.lo = Eigen::Vector2d(0.0, 0.0);
  box.hi = Eigen::Vector2d(10.0, 10.0);

  Trajectory good;
  good.frames.push_back((Eigen::MatrixXd(1, 2) << 5.0, 5.0).finished());
  good.frames.push_back((Eigen::MatrixXd(1, 2) << 5.5, 5.0).finished());
  good.frame_times = {0.1, 0.2};
  CHECK(validate_trajectory(good, 10.0, box).ok);

  Trajectory nan_traj = good;
  nan_traj.frames[1](0, 1) = std::numeric_limits<double>::quiet_NaN();
  auto bad = validate_trajectory(nan_traj, 10.0, box);
  CHECK_FALSE(bad.ok);
  CHECK(bad.frame == 2);

  // 100 m jump between frames 0.1 s apart under a 10 m/s cap.
  Trajectory jump = good;
  jump.frames[1](0, 0) = 105.0;
  jump.frames[1](0, 1) = 5.0;
  CHECK_FALSE(validate_trajectory(jump, 10.0, box).ok);

  // Out of bounds beyond the 1 m pad.
  Trajectory outside = good;
  outside.frames[1](0, 0) = 11.5;
  CHECK_FALSE(validate_trajectory(outside, 1000.0, box).ok);
  Trajectory grazing = good;
  grazing.frames[1](0, 0) = 10.5;  // inside the pad
  CHECK(validate_trajectory(grazing, 1000.0, box).ok);

  // Count changes suspend the displacement check.
  Trajectory regrouped = good;
  regrouped.frames[1] = (Eigen::MatrixXd(2, 2) << 9.0, 9.0, 1.0, 1.0).finished();
  CHECK(validate_trajectory(regrouped, 1e-6, box).ok);
}

}  // TEST_SUITE
