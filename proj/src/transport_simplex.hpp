#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "wdsmc/errors.hpp"

namespace wdsmc::detail {

// Network simplex specialized to the dense transportation problem on the
// complete bipartite graph, plus an artificial root node. The basis is kept
// strongly feasible (every zero-flow tree arc points toward the root); the
// leaving arc on ties is the last blocking arc met when walking the pivot
// cycle from the apex along its orientation, which rules out cycling.
//
// Supplies and demands may carry float rounding imbalance; whatever cannot
// be shipped stays on the high-cost artificial arcs (order 1e-16 mass).
class TransportSimplex {
 public:
  // a: m nonnegative supplies, b: n nonnegative demands, C: m x n costs.
  // Returns the optimal bipartite flows. Throws NumericalFailureError if
  // optimality is not certified within 100 * (m + n) basis exchanges.
  Eigen::MatrixXd solve(const Eigen::MatrixXd& C, const Eigen::VectorXd& a,
                        const Eigen::VectorXd& b) {
    const int m = static_cast<int>(a.size());
    const int n = static_cast<int>(b.size());
    const int root = m + n;
    const int num_nodes = m + n + 1;
    const int num_bip = m * n;
    const int num_arcs = num_bip + m + n;

    const double cmax = C.size() > 0 ? C.maxCoeff() : 0.0;
    const double big = (1.0 + cmax) * static_cast<double>(m + n + 1);
    const double enter_eps = 1e-12 * (1.0 + cmax);

    m_ = m;
    n_ = n;
    big_ = big;
    cost_ = &C;

    flow_.assign(num_arcs, 0.0);
    in_tree_.assign(num_arcs, false);
    parent_.assign(num_nodes, -1);
    pred_.assign(num_nodes, -1);
    depth_.assign(num_nodes, 0);
    pot_.assign(num_nodes, 0.0);
    art_up_.assign(m + n, true);

    for (int t = 0; t < m + n; ++t) {
      const double s = t < m ? a[t] : -b[t - m];
      const int arc = num_bip + t;
      if (s >= 0.0) {
        art_up_[t] = true;  // node -> root, carries s (zero-flow arcs point up)
        flow_[arc] = s;
        pot_[t] = -big;
      } else {
        art_up_[t] = false;  // root -> node, carries -s > 0
        flow_[arc] = -s;
        pot_[t] = big;
      }
      in_tree_[arc] = true;
      parent_[t] = root;
      pred_[t] = arc;
      depth_[t] = 1;
    }

    const long cap = 100L * (m + n);
    long pivots = 0;
    int cursor = 0;
    const int block =
        std::max(64, static_cast<int>(std::lround(std::sqrt(static_cast<double>(num_arcs)))));

    while (true) {
      int enter = -1;
      double best = -enter_eps;
      int scanned = 0;
      while (scanned < num_arcs) {
        const int steps = std::min(block, num_arcs - scanned);
        for (int s = 0; s < steps; ++s) {
          const int e = cursor;
          cursor = cursor + 1 == num_arcs ? 0 : cursor + 1;
          if (in_tree_[e]) continue;
          const double rc = arc_cost(e) + pot_[arc_src(e)] - pot_[arc_dst(e)];
          if (rc < best) {
            best = rc;
            enter = e;
          }
        }
        scanned += steps;
        if (enter >= 0) break;
      }
      if (enter < 0) break;  // no improving arc: optimal

      if (++pivots > cap)
        throw NumericalFailureError("transport solver exceeded pivot cap; degenerate input");

      run_pivot(enter, root);
    }

    Eigen::MatrixXd G(m, n);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) G(i, j) = flow_[i * n + j];
    return G;
  }

 private:
  int arc_src(int e) const {
    if (e < m_ * n_) return e / n_;
    const int t = e - m_ * n_;
    return art_up_[t] ? t : m_ + n_;
  }
  int arc_dst(int e) const {
    if (e < m_ * n_) return m_ + e % n_;
    const int t = e - m_ * n_;
    return art_up_[t] ? m_ + n_ : t;
  }
  double arc_cost(int e) const {
    if (e < m_ * n_) return (*cost_)(e / n_, e % n_);
    return big_;
  }

  void run_pivot(int enter, int root) {
    const int u = arc_src(enter);
    const int v = arc_dst(enter);

    int x = u;
    int y = v;
    while (depth_[x] > depth_[y]) x = parent_[x];
    while (depth_[y] > depth_[x]) y = parent_[y];
    while (x != y) {
      x = parent_[x];
      y = parent_[y];
    }
    const int apex = x;

    path_u_.clear();
    for (int z = u; z != apex; z = parent_[z]) path_u_.push_back(z);
    path_v_.clear();
    for (int z = v; z != apex; z = parent_[z]) path_v_.push_back(z);

    // Cycle orientation: apex -> u, entering arc, v -> apex. Blocking arcs
    // run against it; tie-break keeps the last one in traversal order.
    double delta = std::numeric_limits<double>::infinity();
    int leave = -1;
    bool leave_on_u_side = false;
    bool found = false;

    for (int idx = static_cast<int>(path_u_.size()) - 1; idx >= 0; --idx) {
      const int z = path_u_[idx];
      const int f = pred_[z];
      if (arc_dst(f) != z) {  // points up while cycle moves down: blocking
        const double r = flow_[f];
        if (!found || r <= delta) {
          delta = r;
          leave = f;
          leave_on_u_side = true;
          found = true;
        }
      }
    }
    for (std::size_t idx = 0; idx < path_v_.size(); ++idx) {
      const int z = path_v_[static_cast<int>(idx)];
      const int f = pred_[z];
      if (arc_src(f) != z) {  // points down while cycle moves up: blocking
        const double r = flow_[f];
        if (!found || r <= delta) {
          delta = r;
          leave = f;
          leave_on_u_side = false;
          found = true;
        }
      }
    }
    if (!found)
      throw NumericalFailureError("transport pivot cycle has no blocking arc");

    flow_[enter] += delta;
    for (int z : path_u_) {
      const int f = pred_[z];
      flow_[f] += arc_dst(f) == z ? delta : -delta;
    }
    for (int z : path_v_) {
      const int f = pred_[z];
      flow_[f] += arc_src(f) == z ? delta : -delta;
    }

    // Detach the leaving arc's child subtree, re-root it at the entering
    // arc's endpoint inside it, and hang it off the other endpoint.
    const int attach_inside = leave_on_u_side ? u : v;
    const int attach_outside = leave_on_u_side ? v : u;
    int cut_child = -1;
    for (int z : (leave_on_u_side ? path_u_ : path_v_)) {
      if (pred_[z] == leave) {
        cut_child = z;
        break;
      }
    }

    in_tree_[enter] = true;
    in_tree_[leave] = false;
    flow_[leave] = 0.0;

    int cur = attach_inside;
    int new_parent = attach_outside;
    int carry_arc = enter;
    while (true) {
      const int old_parent = parent_[cur];
      const int old_arc = pred_[cur];
      parent_[cur] = new_parent;
      pred_[cur] = carry_arc;
      if (cur == cut_child) break;
      new_parent = cur;
      carry_arc = old_arc;
      cur = old_parent;
    }

    rebuild_metadata(root);
  }

  // Depths and potentials from scratch; O(nodes) per pivot keeps the tree
  // bookkeeping simple at the problem sizes this solver serves.
  void rebuild_metadata(int root) {
    const int num_nodes = static_cast<int>(parent_.size());
    child_count_.assign(num_nodes + 1, 0);
    for (int z = 0; z < num_nodes; ++z)
      if (z != root) ++child_count_[parent_[z]];
    child_start_.assign(num_nodes + 1, 0);
    for (int z = 0; z < num_nodes; ++z) child_start_[z + 1] = child_start_[z] + child_count_[z];
    child_fill_ = child_start_;
    child_flat_.assign(num_nodes - 1, 0);
    for (int z = 0; z < num_nodes; ++z)
      if (z != root) child_flat_[child_fill_[parent_[z]]++] = z;

    depth_[root] = 0;
    pot_[root] = 0.0;
    stack_.clear();
    stack_.push_back(root);
    while (!stack_.empty()) {
      const int p = stack_.back();
      stack_.pop_back();
      for (int k = child_start_[p]; k < child_start_[p + 1]; ++k) {
        const int c = child_flat_[k];
        depth_[c] = depth_[p] + 1;
        const int f = pred_[c];
        // Tree arcs have zero reduced cost: cost + pot[src] - pot[dst] = 0.
        pot_[c] = arc_dst(f) == c ? pot_[p] + arc_cost(f) : pot_[p] - arc_cost(f);
        stack_.push_back(c);
      }
    }
  }

  int m_ = 0;
  int n_ = 0;
  double big_ = 0.0;
  const Eigen::MatrixXd* cost_ = nullptr;

  std::vector<double> flow_;
  std::vector<bool> in_tree_;
  std::vector<int> parent_;
  std::vector<int> pred_;
  std::vector<int> depth_;
  std::vector<double> pot_;
  std::vector<bool> art_up_;

  std::vector<int> path_u_;
  std::vector<int> path_v_;
  std::vector<int> child_count_;
  std::vector<int> child_start_;
  std::vector<int> child_fill_;
  std::vector<int> child_flat_;
  std::vector<int> stack_;
};

}  // namespace wdsmc::detail
