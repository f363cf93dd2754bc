#include "neardgd/consensus.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "neardgd/error.hpp"

namespace neardgd {

StackedVector::StackedVector(std::size_t n, std::size_t p, std::vector<double> data)
    : n_(n), p_(p), data_(std::move(data)) {
  if (data_.size() != n * p) {
    throw DimensionMismatch("stacked vector needs " + std::to_string(n * p) + " entries, got " +
                            std::to_string(data_.size()));
  }
}

StackedVector StackedVector::replicate(std::size_t n, std::span<const double> v) {
  StackedVector out(n, v.size());
  for (std::size_t i = 0; i < n; ++i) std::copy(v.begin(), v.end(), out.node(i).begin());
  return out;
}

std::vector<double> StackedVector::mean() const {
  std::vector<double> m(p_, 0.0);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t r = 0; r < p_; ++r) m[r] += data_[i * p_ + r];
  for (double& v : m) v /= static_cast<double>(n_);
  return m;
}

double StackedVector::norm() const { return norm2(data_); }

namespace {
void require_same_shape(const StackedVector& a, const StackedVector& b) {
  if (a.nodes() != b.nodes() || a.local_dim() != b.local_dim())
    throw DimensionMismatch("stacked vectors have different shapes");
}
}  // namespace

StackedVector& StackedVector::operator+=(const StackedVector& o) {
  require_same_shape(*this, o);
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
  return *this;
}

StackedVector& StackedVector::operator-=(const StackedVector& o) {
  require_same_shape(*this, o);
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
  return *this;
}

StackedVector& StackedVector::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

StackedVector& StackedVector::axpy(double a, const StackedVector& o) {
  require_same_shape(*this, o);
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += a * o.data_[k];
  return *this;
}

double dot(const StackedVector& a, const StackedVector& b) {
  require_same_shape(a, b);
  return dot(a.data(), b.data());
}

WeightRule parse_weight_rule(const std::string& name) {
  if (name == "metropolis") return WeightRule::kMetropolis;
  if (name == "maxdegree") return WeightRule::kMaxDegree;
  throw ValidationError("unknown weight rule '" + name + "' (expected metropolis|maxdegree)");
}

std::string to_string(WeightRule rule) {
  return rule == WeightRule::kMetropolis ? "metropolis" : "maxdegree";
}

namespace {

template <typename EdgeWeight>
DenseSymMatrix weights_from_rule(const Graph& g, EdgeWeight edge_weight) {
  require_connected(g);
  const std::size_t n = g.node_count();
  DenseMatrix w(n);
  for (const auto& [i, j] : g.edges()) w(i, j) = w(j, i) = edge_weight(i, j);
  for (std::size_t i = 0; i < n; ++i) {
    double off = 0.0;
    for (std::size_t j : g.neighbors(i)) off += w(i, j);
    w(i, i) = 1.0 - off;
  }
  return DenseSymMatrix(std::move(w));
}

}  // namespace

DenseSymMatrix metropolis_weights(const Graph& g) {
  const auto d = degrees(g);
  return weights_from_rule(g, [&](std::size_t i, std::size_t j) {
    return 1.0 / (1.0 + static_cast<double>(std::max(d[i], d[j])));
  });
}

DenseSymMatrix max_degree_weights(const Graph& g) {
  const auto d = degrees(g);
  const double w = 1.0 / (1.0 + static_cast<double>(*std::max_element(d.begin(), d.end())));
  return weights_from_rule(g, [w](std::size_t, std::size_t) { return w; });
}

std::vector<std::string> consensus_violations(const DenseMatrix& w, const Graph& g) {
  std::vector<std::string> out;
  const std::size_t n = g.node_count();
  if (w.dim() != n) {
    out.push_back("dimension " + std::to_string(w.dim()) + " does not match graph with " +
                  std::to_string(n) + " nodes");
    return out;
  }
  auto fmt = [](double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
  };

  const bool symmetric = w.is_symmetric();
  if (!symmetric) out.push_back("not symmetric (asymmetry " + fmt(w.asymmetry()) + ")");

  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0, col = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      row += w(i, j);
      col += w(j, i);
      if (w(i, j) < 0.0) {
        out.push_back("negative entry w(" + std::to_string(i) + "," + std::to_string(j) +
                      ") = " + fmt(w(i, j)));
      }
      const bool allowed = (i == j) || g.has_edge(i, j);
      if (allowed && !(w(i, j) > 0.0)) {
        out.push_back("sparsity: w(" + std::to_string(i) + "," + std::to_string(j) +
                      ") must be positive");
      } else if (!allowed && w(i, j) != 0.0) {
        out.push_back("sparsity: w(" + std::to_string(i) + "," + std::to_string(j) +
                      ") must be zero (no edge)");
      }
    }
    if (std::abs(row - 1.0) > 1e-12) out.push_back("row " + std::to_string(i) + " sums to " + fmt(row));
    if (std::abs(col - 1.0) > 1e-12) out.push_back("column " + std::to_string(i) + " sums to " + fmt(col));
  }

  if (symmetric) {
    const Spectrum s = sym_eigen(w, false);
    if (!(s.min() > kPositiveDefiniteFloor)) out.push_back("not positive definite (lambda_1 = " + fmt(s.min()) + ")");
    if (std::abs(s.max() - 1.0) > 1e-10) out.push_back("top eigenvalue " + fmt(s.max()) + " != 1");
    if (n >= 2) {
      const double beta = s.eigenvalues[n - 2];
      if (!(beta > 0.0 && beta < 1.0)) out.push_back("beta = " + fmt(beta) + " outside (0,1)");
    }
  }
  return out;
}

ConsensusMatrix::ConsensusMatrix(DenseSymMatrix w, Graph g, Spectrum s)
    : w_(std::move(w)), graph_(std::move(g)), spectrum_(std::move(s)) {
  const std::size_t n = w_.dim();
  beta_ = n >= 2 ? spectrum_.eigenvalues[n - 2] : 0.0;
  rows_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    rows_[i].emplace_back(i, w_(i, i));
    for (std::size_t j : graph_.neighbors(i)) rows_[i].emplace_back(j, w_(i, j));
  }
}

ConsensusMatrix ConsensusMatrix::create(const DenseMatrix& w, const Graph& g) {
  const auto bad = consensus_violations(w, g);
  if (!bad.empty()) {
    std::string msg = "invalid consensus matrix:";
    for (const auto& b : bad) msg += "\n  - " + b;
    throw ContractViolation(msg);
  }
  DenseSymMatrix sym(w);
  Spectrum s = sym_eigen(sym, true);
  return ConsensusMatrix(std::move(sym), g, std::move(s));
}

ConsensusMatrix ensure_positive_definite(const DenseSymMatrix& w_tilde, const Graph& g,
                                         double margin) {
  if (!(margin > 0.0)) throw ContractViolation("margin must be positive");
  const double lambda_1 = sym_eigen(w_tilde, false).min();
  if (lambda_1 > kPositiveDefiniteFloor) return ConsensusMatrix::create(w_tilde.matrix(), g);

  const double delta = lambda_1 - margin;
  const std::size_t n = w_tilde.dim();
  DenseMatrix w = w_tilde.matrix();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      w(i, j) = (w(i, j) - (i == j ? delta : 0.0)) / (1.0 - delta);
      if (w(i, j) < 0.0) throw ContractViolation("positive-definite shift produced a negative entry");
    }
  }
  return ConsensusMatrix::create(w, g);
}

ConsensusMatrix make_consensus_matrix(const Graph& g, WeightRule rule, double margin) {
  const DenseSymMatrix w_tilde =
      rule == WeightRule::kMetropolis ? metropolis_weights(g) : max_degree_weights(g);
  return ensure_positive_definite(w_tilde, g, margin);
}

StackedVector apply_consensus(const ConsensusMatrix& w, unsigned t, const StackedVector& y,
                              CommCounter& counter) {
  if (y.nodes() != w.nodes()) {
    throw DimensionMismatch("consensus on " + std::to_string(y.nodes()) +
                            " nodes with a matrix for " + std::to_string(w.nodes()));
  }
  if (t == 0) throw ContractViolation("consensus rounds must be >= 1");
  const std::size_t n = y.nodes(), p = y.local_dim();
  StackedVector cur = y, next(n, p);
  for (unsigned round = 0; round < t; ++round) {
    for (std::size_t i = 0; i < n; ++i) {
      auto out = next.node(i);
      std::fill(out.begin(), out.end(), 0.0);
      for (const auto& [j, wij] : w.rows_[i]) {
        auto in = cur.node(j);
        for (std::size_t r = 0; r < p; ++r) out[r] += wij * in[r];
      }
    }
    std::swap(cur, next);
  }
  counter.consensus_rounds += t;
  return cur;
}

StackedVector average_project(const StackedVector& y) {
  return StackedVector::replicate(y.nodes(), y.mean());
}

}  // namespace neardgd
