#include "wdsmc/density.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "wdsmc/errors.hpp"

namespace wdsmc {

namespace {
constexpr double kInvSqrt2Pi = 0.3989422804014326779399461;
}

long HistogramSpec::cell_count() const {
  long total = 1;
  for (int c : axis_counts) total *= c;
  return total;
}

void HistogramSpec::validate() const {
  const int d = dimension();
  if (d < 1) throw InvalidSpecError("grid needs at least one axis");
  if (origin.size() != d || cell_size.size() != d)
    throw InvalidSpecError("origin/cell_size length must match axis count");
  for (int k = 0; k < d; ++k) {
    if (!(cell_size[k] > 0.0)) throw InvalidSpecError("cell sizes must be positive");
    if (axis_counts[static_cast<std::size_t>(k)] < 1)
      throw InvalidSpecError("axis counts must be positive");
    if (!std::isfinite(origin[k])) throw InvalidSpecError("grid origin must be finite");
  }
}

long HistogramSpec::flat_index_clamped(const Eigen::RowVectorXd& point) const {
  long flat = 0;
  for (int k = 0; k < dimension(); ++k) {
    const int count = axis_counts[static_cast<std::size_t>(k)];
    long idx = static_cast<long>(std::floor((point[k] - origin[k]) / cell_size[k]));
    idx = std::clamp(idx, 0L, static_cast<long>(count - 1));
    flat = flat * count + idx;
  }
  return flat;
}

Eigen::VectorXd HistogramSpec::cell_center(long flat) const {
  const int d = dimension();
  Eigen::VectorXd center(d);
  for (int k = d - 1; k >= 0; --k) {
    const int count = axis_counts[static_cast<std::size_t>(k)];
    const long idx = flat % count;
    flat /= count;
    center[k] = origin[k] + (static_cast<double>(idx) + 0.5) * cell_size[k];
  }
  return center;
}

DiscreteDistribution empirical(const Eigen::MatrixXd& points) {
  return DiscreteDistribution(points);
}

Eigen::VectorXd bin_masses(const DiscreteDistribution& dist, const HistogramSpec& spec) {
  spec.validate();
  if (dist.dimension() != spec.dimension())
    throw DimensionMismatchError("distribution/grid dimensions differ");
  const DiscreteDistribution unit = normalize(dist);
  Eigen::VectorXd cells = Eigen::VectorXd::Zero(spec.cell_count());
  for (Eigen::Index i = 0; i < unit.size(); ++i)
    cells[spec.flat_index_clamped(unit.points.row(i))] += unit.masses[i];
  return cells;
}

DiscreteDistribution histogram(const Eigen::MatrixXd& points, const HistogramSpec& spec) {
  spec.validate();
  if (points.rows() == 0) throw EmptyInputError("histogram needs at least one point");
  if (points.cols() != spec.dimension())
    throw DimensionMismatchError("point/grid dimensions differ");

  // map keeps occupied cells in row-major order.
  std::map<long, long> counts;
  for (Eigen::Index i = 0; i < points.rows(); ++i) ++counts[spec.flat_index_clamped(points.row(i))];

  Eigen::MatrixXd atoms(static_cast<Eigen::Index>(counts.size()), spec.dimension());
  Eigen::VectorXd masses(static_cast<Eigen::Index>(counts.size()));
  Eigen::Index row = 0;
  const double total = static_cast<double>(points.rows());
  for (const auto& [flat, count] : counts) {
    atoms.row(row) = spec.cell_center(flat).transpose();
    masses[row] = static_cast<double>(count) / total;
    ++row;
  }
  return DiscreteDistribution(atoms, masses);
}

DensityGrid kde(const Eigen::MatrixXd& points, const HistogramSpec& spec) {
  spec.validate();
  const Eigen::Index n = points.rows();
  const int d = spec.dimension();
  if (n < 2) throw EmptyInputError("kde needs at least 2 points");
  if (points.cols() != d) throw DimensionMismatchError("point/grid dimensions differ");

  DensityGrid grid;
  grid.origin = spec.origin;
  grid.cell_size = spec.cell_size;
  grid.axis_counts = spec.axis_counts;

  const double scott = std::pow(static_cast<double>(n), -1.0 / (d + 4.0));
  Eigen::VectorXd bandwidth(d);
  for (int k = 0; k < d; ++k) {
    const double mean = points.col(k).mean();
    const double var = (points.col(k).array() - mean).square().sum() / static_cast<double>(n - 1);
    const double sd = std::sqrt(var);
    if (sd > 0.0) {
      bandwidth[k] = scott * sd;
    } else {
      bandwidth[k] = spec.cell_size[k];
      grid.degenerate_spread = true;
    }
  }

  // Per-axis kernel tables, combined per point as a rank-1 tensor update.
  std::vector<Eigen::VectorXd> axis_kernel(static_cast<std::size_t>(d));
  grid.values = Eigen::VectorXd::Zero(spec.cell_count());
  std::vector<long> stride(static_cast<std::size_t>(d), 1);
  for (int k = d - 2; k >= 0; --k)
    stride[static_cast<std::size_t>(k)] =
        stride[static_cast<std::size_t>(k + 1)] * spec.axis_counts[static_cast<std::size_t>(k + 1)];

  std::vector<long> idx(static_cast<std::size_t>(d), 0);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (int k = 0; k < d; ++k) {
      const int count = spec.axis_counts[static_cast<std::size_t>(k)];
      Eigen::VectorXd& col = axis_kernel[static_cast<std::size_t>(k)];
      col.resize(count);
      for (int c = 0; c < count; ++c) {
        const double center = spec.origin[k] + (c + 0.5) * spec.cell_size[k];
        const double z = (center - points(i, k)) / bandwidth[k];
        col[c] = kInvSqrt2Pi / bandwidth[k] * std::exp(-0.5 * z * z);
      }
    }
    std::fill(idx.begin(), idx.end(), 0L);
    while (true) {
      long flat = 0;
      double prod = 1.0;
      for (int k = 0; k < d; ++k) {
        flat += idx[static_cast<std::size_t>(k)] * stride[static_cast<std::size_t>(k)];
        prod *= axis_kernel[static_cast<std::size_t>(k)][idx[static_cast<std::size_t>(k)]];
      }
      grid.values[flat] += prod;
      int k = d - 1;
      while (k >= 0 && ++idx[static_cast<std::size_t>(k)] ==
                           spec.axis_counts[static_cast<std::size_t>(k)]) {
        idx[static_cast<std::size_t>(k)] = 0;
        --k;
      }
      if (k < 0) break;
    }
  }
  grid.values /= static_cast<double>(n);
  return grid;
}

double tv_distance(const DiscreteDistribution& a, const DiscreteDistribution& b,
                   const HistogramSpec& spec) {
  const Eigen::VectorXd pa = bin_masses(a, spec);
  const Eigen::VectorXd pb = bin_masses(b, spec);
  return 0.5 * (pa - pb).cwiseAbs().sum();
}

}  // namespace wdsmc
