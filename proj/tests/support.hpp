#pragma once

// Shared fixtures, generators and independent oracles for the test binaries.
// Oracles here deliberately avoid the library code paths they check: finite
// differences call only value functions, and dense reference products are
// written out with plain loops.

#include <cmath>
#include <functional>
#include <vector>

#include "neardgd/config.hpp"
#include "neardgd/consensus.hpp"
#include "neardgd/diagnostics.hpp"
#include "neardgd/graph.hpp"
#include "neardgd/linalg.hpp"
#include "neardgd/objective.hpp"
#include "neardgd/optimizer.hpp"
#include "neardgd/rng.hpp"

namespace testing {

using namespace neardgd;

// The 2-node instance used throughout the hand examples:
// W = [[0.6,0.4],[0.4,0.6]], f_i(x) = x^2 / 2, p = 1.
inline const Graph& pair_graph() {
  static const Graph g(2, {{0, 1}});
  return g;
}
inline ConsensusMatrix pair_weights() {
  return ConsensusMatrix::create(DenseMatrix{{0.6, 0.4}, {0.4, 0.6}}, pair_graph());
}
inline QuadraticObjective half_square(std::size_t n = 2, std::size_t p = 1) {
  return QuadraticObjective(n, p, std::vector<double>(n * p, 0.0));
}
inline StackedVector sv(std::size_t n, std::size_t p, std::vector<double> v) {
  return StackedVector(n, p, std::move(v));
}

// Random connected graph: a random spanning tree plus random extra edges.
inline Graph random_connected_graph(Rng& rng, std::size_t n_min = 2, std::size_t n_max = 12) {
  const std::size_t n = n_min + static_cast<std::size_t>(rng.canonical() * (n_max - n_min + 1));
  std::vector<Edge> edges;
  std::vector<std::vector<bool>> used(n, std::vector<bool>(n, false));
  for (std::size_t i = 1; i < n; ++i) {
    const auto j = static_cast<std::size_t>(rng.canonical() * i);
    edges.emplace_back(j, i);
    used[j][i] = used[i][j] = true;
  }
  const double extra = rng.canonical();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (!used[i][j] && rng.canonical() < extra * 0.5) edges.emplace_back(i, j);
  return Graph(n, edges);
}

inline StackedVector random_stacked(Rng& rng, std::size_t n, std::size_t p, double scale = 1.0) {
  StackedVector v(n, p);
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = rng.uniform(-scale, scale);
  return v;
}

inline QuarticObjective random_quartic(Rng& rng, std::size_t n, std::size_t p, double radius = 4.0) {
  const std::size_t index = 1 + static_cast<std::size_t>(rng.canonical() * p);
  return QuarticObjective(sample_quartic_problem(n, p, index, 1.0, rng), radius);
}

// Central-difference gradient of a scalar function of a flat vector.
inline std::vector<double> fd_gradient(const std::function<double(const std::vector<double>&)>& f,
                                       std::vector<double> x, double h = 1e-5) {
  std::vector<double> g(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double keep = x[j];
    x[j] = keep + h;
    const double up = f(x);
    x[j] = keep - h;
    const double down = f(x);
    x[j] = keep;
    g[j] = (up - down) / (2 * h);
  }
  return g;
}

inline double rel_error(const std::vector<double>& a, const std::vector<double>& b) {
  double diff = 0.0, ref = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    diff += (a[j] - b[j]) * (a[j] - b[j]);
    ref += a[j] * a[j];
  }
  return std::sqrt(diff) / std::max(1.0, std::sqrt(ref));
}

inline std::vector<double> to_vec(std::span<const double> s) { return {s.begin(), s.end()}; }

// Reference dense product (W^t (x) I_p) y with plain loops.
inline std::vector<double> dense_consensus(const DenseMatrix& w, unsigned t, std::vector<double> y,
                                           std::size_t p) {
  const std::size_t n = w.dim();
  for (unsigned r = 0; r < t; ++r) {
    std::vector<double> next(y.size(), 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t d = 0; d < p; ++d) next[i * p + d] += w(i, j) * y[j * p + d];
    y = std::move(next);
  }
  return y;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
  return m;
}

}  // namespace testing
