#pragma once

#include <Eigen/Dense>

#include "wdsmc/errors.hpp"

namespace wdsmc {

// Weighted point cloud: one row of `points` per atom, nonnegative masses
// with positive total. Masses need not sum to one; normalize() rescales.
struct DiscreteDistribution {
  Eigen::MatrixXd points;  // n x d
  Eigen::VectorXd masses;  // n

  DiscreteDistribution() = default;
  DiscreteDistribution(Eigen::MatrixXd pts, Eigen::VectorXd m);

  // Equal-mass atoms.
  explicit DiscreteDistribution(Eigen::MatrixXd pts);

  Eigen::Index size() const { return points.rows(); }
  Eigen::Index dimension() const { return points.cols(); }
  double total_mass() const { return masses.sum(); }
};

// Rescales masses to unit total. Throws ZeroMassError on zero/negative total.
DiscreteDistribution normalize(const DiscreteDistribution& dist);

}  // namespace wdsmc
