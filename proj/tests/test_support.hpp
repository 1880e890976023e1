#pragma once

// Shared test utilities: independent oracles and random-instance generators.
// The oracles deliberately avoid the library's solver code paths.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "wdsmc/distribution.hpp"
#include "wdsmc/random.hpp"

namespace testsupport {

// Exhaustive vertex enumeration for the transportation polytope: every basic
// feasible solution is a spanning tree of the complete bipartite graph with
// m + n - 1 arcs. Enumerate arc subsets, keep the acyclic spanning ones,
// solve the tree flows by leaf elimination, and take the cheapest feasible
// vertex. Exact up to float rounding; intended for m, n <= 4.
inline double brute_force_transport_cost(const Eigen::MatrixXd& C,
                                         const Eigen::VectorXd& a,
                                         const Eigen::VectorXd& b) {
  const int m = static_cast<int>(a.size());
  const int n = static_cast<int>(b.size());
  const int arcs = m * n;
  const int basis = m + n - 1;

  std::vector<int> pick(basis);
  std::iota(pick.begin(), pick.end(), 0);
  double best = std::numeric_limits<double>::infinity();

  std::vector<int> uf(m + n);
  std::vector<int> degree(m + n);
  std::vector<double> residual(m + n);
  std::vector<std::vector<std::pair<int, int>>> incident(m + n);  // (other node, arc slot)
  std::vector<double> flow(basis);

  auto find = [&](int z) {
    while (uf[z] != z) {
      uf[z] = uf[uf[z]];
      z = uf[z];
    }
    return z;
  };

  while (true) {
    // Union-find spanning test: basis arcs must join all m + n nodes acyclically.
    std::iota(uf.begin(), uf.end(), 0);
    bool acyclic = true;
    for (int k = 0; k < basis && acyclic; ++k) {
      const int arc = pick[k];
      const int u = arc / n;
      const int v = m + arc % n;
      const int ru = find(u);
      const int rv = find(v);
      if (ru == rv)
        acyclic = false;
      else
        uf[ru] = rv;
    }
    if (acyclic) {
      for (int z = 0; z < m + n; ++z) {
        degree[z] = 0;
        incident[z].clear();
        residual[z] = z < m ? a[z] : -b[z - m];
      }
      for (int k = 0; k < basis; ++k) {
        const int arc = pick[k];
        const int u = arc / n;
        const int v = m + arc % n;
        incident[u].push_back({v, k});
        incident[v].push_back({u, k});
        ++degree[u];
        ++degree[v];
      }
      // Peel leaves; each leaf fixes its unique incident arc's flow.
      std::vector<int> leaves;
      std::vector<bool> done(m + n, false);
      for (int z = 0; z < m + n; ++z)
        if (degree[z] == 1) leaves.push_back(z);
      for (int processed = 0; processed + 1 < m + n; ++processed) {
        const int leaf = leaves.back();
        leaves.pop_back();
        done[leaf] = true;
        int other = -1;
        int slot = -1;
        for (auto [cand, s] : incident[leaf]) {
          if (!done[cand]) {
            other = cand;
            slot = s;
            break;
          }
        }
        // Flows are signed source -> sink. A source leaf ships its residual
        // out; a sink leaf draws its residual in. The neighbor absorbs it.
        double f;
        if (leaf < m) {
          f = residual[leaf];
          residual[other] += f;  // sink received f
        } else {
          f = -residual[leaf];
          residual[other] -= f;  // source shipped f
        }
        flow[slot] = f;
        residual[leaf] = 0.0;
        if (--degree[other] == 1 && !done[other]) leaves.push_back(other);
        degree[leaf] = 0;
      }
      bool feasible = true;
      double cost = 0.0;
      for (int k = 0; k < basis; ++k) {
        if (flow[k] < -1e-12) {
          feasible = false;
          break;
        }
        const int arc = pick[k];
        cost += std::max(flow[k], 0.0) * C(arc / n, arc % n);
      }
      if (feasible) best = std::min(best, cost);
    }

    // Next combination.
    int i = basis - 1;
    while (i >= 0 && pick[i] == arcs - basis + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < basis; ++j) pick[j] = pick[j - 1] + 1;
  }
  return best;
}

// Sorted-CDF integral for 1-D Wasserstein distance, written independently of
// the library's sweep (merges via full sort of breakpoints, prefix sums).
inline double cdf_oracle_1d(std::vector<double> xs, std::vector<double> wx,
                            std::vector<double> ys, std::vector<double> wy) {
  const double sx = std::accumulate(wx.begin(), wx.end(), 0.0);
  const double sy = std::accumulate(wy.begin(), wy.end(), 0.0);
  std::vector<int> ox(xs.size()), oy(ys.size());
  std::iota(ox.begin(), ox.end(), 0);
  std::iota(oy.begin(), oy.end(), 0);
  std::sort(ox.begin(), ox.end(), [&](int l, int r) { return xs[l] < xs[r]; });
  std::sort(oy.begin(), oy.end(), [&](int l, int r) { return ys[l] < ys[r]; });

  std::size_t i = 0, j = 0;
  double fx = 0.0, fy = 0.0, prev = 0.0, total = 0.0;
  bool started = false;
  while (i < ox.size() || j < oy.size()) {
    double x;
    if (j >= oy.size() || (i < ox.size() && xs[ox[i]] <= ys[oy[j]]))
      x = xs[ox[i]];
    else
      x = ys[oy[j]];
    if (started) total += std::abs(fx - fy) * (x - prev);
    while (i < ox.size() && xs[ox[i]] <= x) fx += wx[ox[i++]] / sx;
    while (j < oy.size() && ys[oy[j]] <= x) fy += wy[oy[j++]] / sy;
    prev = x;
    started = true;
  }
  return total;
}

inline wdsmc::DiscreteDistribution random_cloud(wdsmc::Rng& rng, int n, int d,
                                                bool random_masses = true,
                                                double box = 1.0) {
  Eigen::MatrixXd pts(n, d);
  Eigen::VectorXd mass(n);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < d; ++k) pts(i, k) = rng.uniform(0.0, box);
    mass[i] = random_masses ? rng.uniform(0.01, 1.0) : 1.0;
  }
  return wdsmc::DiscreteDistribution(pts, mass);
}

}  // namespace testsupport
