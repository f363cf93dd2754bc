#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "neardgd/graph.hpp"
#include "neardgd/linalg.hpp"

namespace neardgd {

/// n local p-vectors concatenated node-major: node i owns [i*p, (i+1)*p).
class StackedVector {
 public:
  StackedVector() = default;
  StackedVector(std::size_t n, std::size_t p) : n_(n), p_(p), data_(n * p, 0.0) {}
  StackedVector(std::size_t n, std::size_t p, std::vector<double> data);

  /// 1_n (x) v
  static StackedVector replicate(std::size_t n, std::span<const double> v);

  std::size_t nodes() const { return n_; }
  std::size_t local_dim() const { return p_; }
  std::size_t size() const { return data_.size(); }

  std::span<double> node(std::size_t i) { return {data_.data() + i * p_, p_}; }
  std::span<const double> node(std::size_t i) const { return {data_.data() + i * p_, p_}; }
  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }
  double& operator[](std::size_t k) { return data_[k]; }
  double operator[](std::size_t k) const { return data_[k]; }

  /// Across-node mean (1/n) sum_i v_i.
  std::vector<double> mean() const;
  double norm() const;

  StackedVector& operator+=(const StackedVector& o);
  StackedVector& operator-=(const StackedVector& o);
  StackedVector& operator*=(double s);
  /// this += a * o
  StackedVector& axpy(double a, const StackedVector& o);

  friend StackedVector operator+(StackedVector a, const StackedVector& b) { return a += b; }
  friend StackedVector operator-(StackedVector a, const StackedVector& b) { return a -= b; }
  friend StackedVector operator*(double s, StackedVector a) { return a *= s; }
  friend bool operator==(const StackedVector&, const StackedVector&) = default;

 private:
  std::size_t n_ = 0;
  std::size_t p_ = 0;
  std::vector<double> data_;
};

double dot(const StackedVector& a, const StackedVector& b);

struct CommCounter {
  std::uint64_t consensus_rounds = 0;
  std::uint64_t gradient_evals = 0;
};

enum class WeightRule { kMetropolis, kMaxDegree };

WeightRule parse_weight_rule(const std::string& name);
std::string to_string(WeightRule rule);

/// w_ij = 1 / (1 + max(d_i, d_j)) on edges, diagonal takes the residual.
DenseSymMatrix metropolis_weights(const Graph& g);
/// w_ij = 1 / (1 + max_k d_k) on edges, diagonal takes the residual.
DenseSymMatrix max_degree_weights(const Graph& g);

/// lambda_1 at or below this is treated as zero: Jacobi round-off on a singular
/// W (e.g. ring(3) Metropolis) can come out as +1e-17.
inline constexpr double kPositiveDefiniteFloor = 1e-10;

/// Lists every consensus-matrix property `w` fails for graph `g`: symmetry,
/// row sums within 1e-12, nonnegativity, exact sparsity pattern, positive
/// definiteness, beta in (0,1) and top eigenvalue 1. Empty means valid.
std::vector<std::string> consensus_violations(const DenseMatrix& w, const Graph& g);

/// Symmetric, doubly stochastic, positive-definite weights with the spectrum
/// cached at construction. Only obtainable through create() or
/// ensure_positive_definite(), both of which validate.
class ConsensusMatrix {
 public:
  /// Throws ContractViolation listing every failed property.
  static ConsensusMatrix create(const DenseMatrix& w, const Graph& g);

  const DenseSymMatrix& weights() const { return w_; }
  const Graph& graph() const { return graph_; }
  const Spectrum& spectrum() const { return spectrum_; }
  std::size_t nodes() const { return w_.dim(); }
  /// Second-largest eigenvalue.
  double beta() const { return beta_; }
  double lambda_min() const { return spectrum_.eigenvalues.front(); }

 private:
  ConsensusMatrix(DenseSymMatrix w, Graph g, Spectrum s);

  DenseSymMatrix w_;
  Graph graph_;
  Spectrum spectrum_;
  double beta_ = 0.0;
  // Per-row neighbour weights used by the hot loop.
  std::vector<std::vector<std::pair<std::size_t, double>>> rows_;

  friend StackedVector apply_consensus(const ConsensusMatrix&, unsigned, const StackedVector&,
                                       CommCounter&);
};

/// Returns `w_tilde` as is when lambda_1 > kPositiveDefiniteFloor, otherwise
/// (1 - delta)^{-1} (w_tilde - delta I) with delta = lambda_1 - margin.
ConsensusMatrix ensure_positive_definite(const DenseSymMatrix& w_tilde, const Graph& g,
                                         double margin = 0.1);

ConsensusMatrix make_consensus_matrix(const Graph& g, WeightRule rule, double margin = 0.1);

/// Z^t y by t sequential neighbour exchanges. Adds exactly t to
/// counter.consensus_rounds.
StackedVector apply_consensus(const ConsensusMatrix& w, unsigned t, const StackedVector& y,
                              CommCounter& counter);

/// M y: every node slice replaced by the across-node mean.
StackedVector average_project(const StackedVector& y);

}  // namespace neardgd
