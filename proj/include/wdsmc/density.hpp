#pragma once

#include <Eigen/Dense>
#include <vector>

#include "wdsmc/distribution.hpp"

namespace wdsmc {

// Axis-aligned binning grid: cell (i_1, ..., i_d) covers
// origin + [i .* cell_size, (i + 1) .* cell_size).
struct HistogramSpec {
  Eigen::VectorXd origin;
  Eigen::VectorXd cell_size;     // strictly positive per axis
  std::vector<int> axis_counts;  // strictly positive per axis

  int dimension() const { return static_cast<int>(axis_counts.size()); }
  long cell_count() const;
  void validate() const;  // throws InvalidSpecError

  // Row-major flat index; point coordinates clamp into the boundary cells.
  long flat_index_clamped(const Eigen::RowVectorXd& point) const;
  Eigen::VectorXd cell_center(long flat) const;
};

// Dense evaluation of a density on the cells of a HistogramSpec grid.
struct DensityGrid {
  Eigen::VectorXd origin;
  Eigen::VectorXd cell_size;
  std::vector<int> axis_counts;
  Eigen::VectorXd values;  // row-major over cells
  bool degenerate_spread = false;

  int dimension() const { return static_cast<int>(axis_counts.size()); }
  double cell_volume() const { return cell_size.prod(); }
  // values summed times cell volume.
  double integral() const { return values.sum() * cell_volume(); }
};

// Equal-mass atom per input point (duplicates kept as separate atoms).
DiscreteDistribution empirical(const Eigen::MatrixXd& points);

// Atoms at centers of occupied cells, masses proportional to in-cell counts
// (normalized); out-of-grid points clamp to the boundary cell.
DiscreteDistribution histogram(const Eigen::MatrixXd& points, const HistogramSpec& spec);

// Gaussian product-kernel density on the grid. Per-axis bandwidth follows
// Scott's rule, n^(-1/(d+4)) * axis sample std; an axis with zero spread
// falls back to that axis's cell size and sets degenerate_spread.
// Requires at least 2 points.
DensityGrid kde(const Eigen::MatrixXd& points, const HistogramSpec& spec);

// Total variation distance after binning both distributions on a common
// grid: (1/2) sum |p_cell - q_cell|. Always in [0, 1].
double tv_distance(const DiscreteDistribution& a, const DiscreteDistribution& b,
                   const HistogramSpec& spec);

// Mass-weighted binning used by tv_distance; exposed for tests.
Eigen::VectorXd bin_masses(const DiscreteDistribution& dist, const HistogramSpec& spec);

}  // namespace wdsmc
