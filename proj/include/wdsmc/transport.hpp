#pragma once

#include <Eigen/Dense>

#include "wdsmc/distribution.hpp"

namespace wdsmc {

// Optimal coupling between two weighted point clouds under Euclidean ground
// cost: min sum(C .* G) s.t. G 1 = a, G^T 1 = b, G >= 0, solved exactly.
struct TransportPlan {
  Eigen::MatrixXd flows;  // m x n, row sums = source masses, col sums = target masses
  double total_cost = 0.0;
};

// C(i, j) = ||u_i - v_j||_2. Throws DimensionMismatchError on unequal d.
Eigen::MatrixXd cost_matrix(const DiscreteDistribution& source,
                            const DiscreteDistribution& target);

// Exact solve via network simplex on the complete bipartite transport graph.
// Both marginals are normalized to unit total mass first. Throws
// NumericalFailureError if optimality is not certified within the pivot cap
// of 100 * (m + n) basis exchanges.
TransportPlan solve_transport(const DiscreteDistribution& source,
                              const DiscreteDistribution& target);

// sum(C .* G) / sum(G) for the optimal plan; metric on normalized clouds.
double wasserstein_distance(const DiscreteDistribution& source,
                            const DiscreteDistribution& target);

// Exact 1-D fast path: integral of |F_source - F_target| between sorted
// atom positions. Requires dimension == 1.
double wasserstein_1d(const DiscreteDistribution& source,
                      const DiscreteDistribution& target);

}  // namespace wdsmc
