#include "wdsmc/model.hpp"

#include <cmath>
#include <utility>

#include "wdsmc/errors.hpp"

namespace wdsmc {

ParameterVector::ParameterVector(std::vector<std::string> n, Eigen::VectorXd v) {
  if (static_cast<Eigen::Index>(n.size()) != v.size())
    throw DimensionMismatchError("parameter name/value counts differ");
  names = std::move(n);
  values = std::move(v);
}

bool ParameterVector::has(const std::string& name) const {
  for (const auto& n : names)
    if (n == name) return true;
  return false;
}

double ParameterVector::get(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return values[static_cast<Eigen::Index>(i)];
  throw IndexOutOfRangeError("unknown parameter: " + name);
}

double ParameterVector::get_or(const std::string& name, double fallback) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return values[static_cast<Eigen::Index>(i)];
  return fallback;
}

Trajectory ForwardModel::simulate(const ParameterVector& theta, int horizon) const {
  Trajectory out;
  out.frames.reserve(static_cast<std::size_t>(horizon));
  auto session = make_session(theta);
  const double spacing = frame_spacing();
  for (int t = 1; t <= horizon; ++t) {
    out.frames.push_back(session->advance());
    out.frame_times.push_back(spacing * t);
  }
  return out;
}

DiscreteDistribution observe(const Eigen::MatrixXd& frame, double sigma, Rng& rng) {
  if (frame.rows() == 0) throw EmptyInputError("cannot observe an empty frame");
  Eigen::MatrixXd noisy = frame;
  for (Eigen::Index i = 0; i < noisy.rows(); ++i)
    for (Eigen::Index k = 0; k < noisy.cols(); ++k) noisy(i, k) += rng.normal(0.0, sigma);
  return DiscreteDistribution(std::move(noisy));
}

DiscreteDistribution synthetic_observation(const Trajectory& trajectory, int t) {
  if (t < 1 || t > trajectory.horizon())
    throw IndexOutOfRangeError("frame index out of range");
  return DiscreteDistribution(trajectory.frames[static_cast<std::size_t>(t - 1)]);
}

ValidationResult validate_frame(const Eigen::MatrixXd& frame,
                                const Eigen::MatrixXd* previous, int frame_index,
                                double speed_cap, double frame_spacing, const Box& bounds) {
  for (Eigen::Index i = 0; i < frame.rows(); ++i) {
    for (Eigen::Index k = 0; k < frame.cols(); ++k) {
      if (!std::isfinite(frame(i, k)))
        return ValidationResult::bad("non-finite coordinate", frame_index);
    }
    if (!bounds.contains(frame.row(i), 1.0))
      return ValidationResult::bad("position outside scenario bounds", frame_index);
  }
  if (previous != nullptr && previous->rows() == frame.rows() && frame.rows() > 0) {
    const double max_step = speed_cap * frame_spacing;
    for (Eigen::Index i = 0; i < frame.rows(); ++i) {
      const double moved = (frame.row(i) - previous->row(i)).norm();
      if (moved > max_step)
        return ValidationResult::bad("inter-frame displacement exceeds speed cap", frame_index);
    }
  }
  return ValidationResult::good();
}

ValidationResult validate_trajectory(const Trajectory& trajectory, double speed_cap,
                                     const Box& bounds) {
  double spacing = 0.1;
  if (trajectory.frame_times.size() >= 2)
    spacing = trajectory.frame_times[1] - trajectory.frame_times[0];
  else if (trajectory.frame_times.size() == 1)
    spacing = trajectory.frame_times[0];

  for (int t = 1; t <= trajectory.horizon(); ++t) {
    const Eigen::MatrixXd* prev =
        t >= 2 ? &trajectory.frames[static_cast<std::size_t>(t - 2)] : nullptr;
    auto result = validate_frame(trajectory.frames[static_cast<std::size_t>(t - 1)], prev, t,
                                 speed_cap, spacing, bounds);
    if (!result.ok) return result;
  }
  return ValidationResult::good();
}

}  // namespace wdsmc
