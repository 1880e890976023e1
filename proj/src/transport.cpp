#include "wdsmc/transport.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "transport_simplex.hpp"

namespace wdsmc {

Eigen::MatrixXd cost_matrix(const DiscreteDistribution& source,
                            const DiscreteDistribution& target) {
  if (source.dimension() != target.dimension())
    throw DimensionMismatchError("source and target atoms have different dimensions");
  const Eigen::Index m = source.size();
  const Eigen::Index n = target.size();
  Eigen::MatrixXd C(m, n);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      C(i, j) = (source.points.row(i) - target.points.row(j)).norm();
  return C;
}

TransportPlan solve_transport(const DiscreteDistribution& source,
                              const DiscreteDistribution& target) {
  const DiscreteDistribution a = normalize(source);
  const DiscreteDistribution b = normalize(target);
  const Eigen::MatrixXd C = cost_matrix(a, b);

  detail::TransportSimplex simplex;
  TransportPlan plan;
  plan.flows = simplex.solve(C, a.masses, b.masses);
  plan.total_cost = C.cwiseProduct(plan.flows).sum();
  return plan;
}

double wasserstein_distance(const DiscreteDistribution& source,
                            const DiscreteDistribution& target) {
  const TransportPlan plan = solve_transport(source, target);
  return plan.total_cost / plan.flows.sum();
}

double wasserstein_1d(const DiscreteDistribution& source,
                      const DiscreteDistribution& target) {
  if (source.dimension() != 1 || target.dimension() != 1)
    throw DimensionMismatchError("wasserstein_1d requires dimension 1");

  const double mass_a = source.total_mass();
  const double mass_b = target.total_mass();
  if (!(mass_a > 0.0) || !(mass_b > 0.0)) throw ZeroMassError("zero total mass");

  struct Atom {
    double x;
    double da;
    double db;
  };
  std::vector<Atom> atoms;
  atoms.reserve(static_cast<std::size_t>(source.size() + target.size()));
  for (Eigen::Index i = 0; i < source.size(); ++i)
    atoms.push_back({source.points(i, 0), source.masses[i] / mass_a, 0.0});
  for (Eigen::Index j = 0; j < target.size(); ++j)
    atoms.push_back({target.points(j, 0), 0.0, target.masses[j] / mass_b});
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& l, const Atom& r) { return l.x < r.x; });

  // Integral of |F_source - F_target| over the merged support.
  double distance = 0.0;
  double cum_a = 0.0;
  double cum_b = 0.0;
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    if (k > 0) distance += std::abs(cum_a - cum_b) * (atoms[k].x - atoms[k - 1].x);
    cum_a += atoms[k].da;
    cum_b += atoms[k].db;
  }
  return distance;
}

}  // namespace wdsmc
