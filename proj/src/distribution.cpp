#include "wdsmc/distribution.hpp"

#include <utility>

namespace wdsmc {

namespace {

void check_invariants(const Eigen::MatrixXd& pts, const Eigen::VectorXd& m) {
  if (pts.rows() == 0) throw EmptyInputError("distribution needs at least one atom");
  if (pts.cols() < 1) throw DimensionMismatchError("atoms need dimension >= 1");
  if (m.size() != pts.rows())
    throw DimensionMismatchError("mass count does not match atom count");
  if ((m.array() < 0.0).any()) throw NegativeMassError("masses must be nonnegative");
  if (!(m.sum() > 0.0)) throw ZeroMassError("total mass must be positive");
}

}  // namespace

DiscreteDistribution::DiscreteDistribution(Eigen::MatrixXd pts, Eigen::VectorXd m) {
  check_invariants(pts, m);
  points = std::move(pts);
  masses = std::move(m);
}

DiscreteDistribution::DiscreteDistribution(Eigen::MatrixXd pts) {
  if (pts.rows() == 0) throw EmptyInputError("distribution needs at least one atom");
  Eigen::VectorXd m = Eigen::VectorXd::Constant(pts.rows(), 1.0 / static_cast<double>(pts.rows()));
  check_invariants(pts, m);
  points = std::move(pts);
  masses = std::move(m);
}

DiscreteDistribution normalize(const DiscreteDistribution& dist) {
  const double total = dist.masses.sum();
  if (!(total > 0.0)) throw ZeroMassError("cannot normalize zero total mass");
  DiscreteDistribution out = dist;
  out.masses /= total;
  return out;
}

}  // namespace wdsmc
