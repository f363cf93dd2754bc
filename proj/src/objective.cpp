#include "neardgd/objective.hpp"

#include <algorithm>
#include <cmath>

#include "neardgd/error.hpp"

namespace neardgd {

namespace {

void require_dim(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw DimensionMismatch(std::string(what) + ": expected local dimension " +
                            std::to_string(want) + ", got " + std::to_string(got));
  }
}

void require_node(std::size_t node, std::size_t n) {
  if (node >= n) throw ContractViolation("node index " + std::to_string(node) + " out of range");
}

}  // namespace

double stacked_value(const Objective& f, const StackedVector& x) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.nodes(); ++i) s += f.local_value(i, x.node(i));
  return s;
}

StackedVector stacked_gradient(const Objective& f, const StackedVector& x) {
  if (x.nodes() != f.nodes() || x.local_dim() != f.local_dim())
    throw DimensionMismatch("stacked gradient: iterate shape does not match objective");
  StackedVector g(x.nodes(), x.local_dim());
  for (std::size_t i = 0; i < x.nodes(); ++i) f.local_gradient(i, x.node(i), g.node(i));
  return g;
}

DenseMatrix stacked_hessian(const Objective& f, const StackedVector& x) {
  const std::size_t n = x.nodes(), p = x.local_dim();
  DenseMatrix h(n * p);
  for (std::size_t i = 0; i < n; ++i) {
    const DenseSymMatrix block = f.local_hessian(i, x.node(i));
    for (std::size_t r = 0; r < p; ++r)
      for (std::size_t s = 0; s < p; ++s) h(i * p + r, i * p + s) = block(r, s);
  }
  return h;
}

double global_value(const Objective& f, std::span<const double> x) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.nodes(); ++i) s += f.local_value(i, x);
  return s;
}

std::vector<double> global_gradient(const Objective& f, std::span<const double> x) {
  std::vector<double> g(x.size(), 0.0), gi(x.size());
  for (std::size_t i = 0; i < f.nodes(); ++i) {
    f.local_gradient(i, x, gi);
    for (std::size_t r = 0; r < g.size(); ++r) g[r] += gi[r];
  }
  return g;
}

// --- quadratic-quartic ------------------------------------------------------

double QuadraticQuarticProblem::curvature_sum() const {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += q_at(i, coord());
  return s;
}

void validate(const QuadraticQuarticProblem& prob) {
  if (prob.n == 0 || prob.p == 0) throw ValidationError("quartic problem needs n, p >= 1");
  if (prob.index < 1 || prob.index > prob.p)
    throw ValidationError("distinguished index must lie in 1..p");
  if (!(prob.c > 0.0)) throw ValidationError("quartic weight c must be positive");
  if (prob.q.size() != prob.n * prob.p) throw ValidationError("Q diagonals have the wrong size");
  for (std::size_t i = 0; i < prob.n; ++i) {
    for (std::size_t j = 0; j < prob.p; ++j) {
      const double v = prob.q_at(i, j);
      const bool ok = (j == prob.coord()) ? v < 0.0 : v > 0.0;
      if (!ok) {
        throw ValidationError("q^" + std::to_string(i) + "_" + std::to_string(j + 1) +
                              " has the wrong sign");
      }
    }
  }
  if (!(prob.curvature_sum() < 0.0)) throw ValidationError("sum of q^i_II must be negative");
}

double quartic_local_value(const QuadraticQuarticProblem& prob, std::size_t node,
                           std::span<const double> x) {
  require_node(node, prob.n);
  require_dim(x.size(), prob.p, "quartic value");
  double quad = 0.0;
  for (std::size_t j = 0; j < prob.p; ++j) quad += prob.q_at(node, j) * x[j] * x[j];
  const double xi = x[prob.coord()];
  const double xi2 = xi * xi;
  return 0.5 * quad + prob.c * prob.c / (4.0 * static_cast<double>(prob.n)) * xi2 * xi2;
}

std::vector<double> quartic_local_grad(const QuadraticQuarticProblem& prob, std::size_t node,
                                       std::span<const double> x) {
  require_node(node, prob.n);
  require_dim(x.size(), prob.p, "quartic gradient");
  std::vector<double> g(prob.p);
  for (std::size_t j = 0; j < prob.p; ++j) g[j] = prob.q_at(node, j) * x[j];
  const double xi = x[prob.coord()];
  g[prob.coord()] += prob.c * prob.c / static_cast<double>(prob.n) * xi * xi * xi;
  return g;
}

DenseSymMatrix quartic_local_hessian(const QuadraticQuarticProblem& prob, std::size_t node,
                                     std::span<const double> x) {
  require_node(node, prob.n);
  require_dim(x.size(), prob.p, "quartic Hessian");
  DenseMatrix h(prob.p);
  for (std::size_t j = 0; j < prob.p; ++j) h(j, j) = prob.q_at(node, j);
  const double xi = x[prob.coord()];
  h(prob.coord(), prob.coord()) += 3.0 * prob.c * prob.c / static_cast<double>(prob.n) * xi * xi;
  return DenseSymMatrix(std::move(h));
}

std::pair<std::vector<double>, std::vector<double>> quartic_minimizers(
    const QuadraticQuarticProblem& prob) {
  const double s = prob.curvature_sum();
  if (!(s < 0.0)) throw ValidationError("quartic problem has no minimizers off the origin");
  const double m = std::sqrt(-s) / prob.c;
  std::vector<double> plus(prob.p, 0.0), minus(prob.p, 0.0);
  plus[prob.coord()] = m;
  minus[prob.coord()] = -m;
  return {plus, minus};
}

double quartic_optimal_value(const QuadraticQuarticProblem& prob) {
  // f(x*) = 1/2 S (-S/c^2) + 1/4 c^2 (S/c^2)^2 = -S^2 / (4 c^2)
  const double s = prob.curvature_sum();
  return -s * s / (4.0 * prob.c * prob.c);
}

QuadraticQuarticProblem sample_quartic_problem(std::size_t n, std::size_t p, std::size_t index,
                                               double c, Rng& rng) {
  if (index < 1 || index > p) throw ValidationError("distinguished index must lie in 1..p");
  QuadraticQuarticProblem prob{n, p, index, c, std::vector<double>(n * p)};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < p; ++j)
      prob.q[i * p + j] = (j == index - 1) ? rng.uniform_open(-1.0, 0.0) : rng.uniform_open(0.0, 1.0);
  return prob;
}

QuadraticQuarticProblem sample_quartic_problem(std::size_t n, std::size_t p, std::size_t index,
                                               double c, std::uint64_t seed) {
  Rng rng(seed);
  return sample_quartic_problem(n, p, index, c, rng);
}

double lipschitz_estimate(const QuadraticQuarticProblem& prob, double radius) {
  const double quartic = 3.0 * prob.c * prob.c / static_cast<double>(prob.n) * radius * radius;
  double best = 0.0;
  for (std::size_t i = 0; i < prob.n; ++i) {
    double m = 0.0;
    for (std::size_t j = 0; j < prob.p; ++j) m = std::max(m, std::abs(prob.q_at(i, j)));
    best = std::max(best, m + quartic);
  }
  return best;
}

QuarticObjective::QuarticObjective(QuadraticQuarticProblem prob, double radius)
    : prob_(std::move(prob)), lipschitz_(0.0) {
  validate(prob_);
  if (!(radius > 0.0)) throw ValidationError("Lipschitz radius must be positive");
  lipschitz_ = lipschitz_estimate(prob_, radius);
}

double QuarticObjective::local_value(std::size_t node, std::span<const double> x) const {
  return quartic_local_value(prob_, node, x);
}

void QuarticObjective::local_gradient(std::size_t node, std::span<const double> x,
                                      std::span<double> out) const {
  require_dim(out.size(), prob_.p, "quartic gradient output");
  const auto g = quartic_local_grad(prob_, node, x);
  std::copy(g.begin(), g.end(), out.begin());
}

DenseSymMatrix QuarticObjective::local_hessian(std::size_t node, std::span<const double> x) const {
  return quartic_local_hessian(prob_, node, x);
}

// --- quadratic --------------------------------------------------------------

QuadraticObjective::QuadraticObjective(std::size_t n, std::size_t p, std::vector<double> targets)
    : n_(n), p_(p), b_(std::move(targets)) {
  if (b_.size() != n * p) throw DimensionMismatch("quadratic targets must have n*p entries");
}

double QuadraticObjective::local_value(std::size_t node, std::span<const double> x) const {
  require_node(node, n_);
  require_dim(x.size(), p_, "quadratic value");
  double s = 0.0;
  for (std::size_t r = 0; r < p_; ++r) {
    const double d = x[r] - b_[node * p_ + r];
    s += d * d;
  }
  return 0.5 * s;
}

void QuadraticObjective::local_gradient(std::size_t node, std::span<const double> x,
                                        std::span<double> out) const {
  require_node(node, n_);
  require_dim(x.size(), p_, "quadratic gradient");
  require_dim(out.size(), p_, "quadratic gradient output");
  for (std::size_t r = 0; r < p_; ++r) out[r] = x[r] - b_[node * p_ + r];
}

DenseSymMatrix QuadraticObjective::local_hessian(std::size_t node, std::span<const double> x) const {
  require_node(node, n_);
  require_dim(x.size(), p_, "quadratic Hessian");
  return DenseSymMatrix(DenseMatrix::identity(p_));
}

std::vector<double> QuadraticObjective::minimizer() const {
  return StackedVector(n_, p_, b_).mean();
}

std::optional<double> QuadraticObjective::optimal_value() const {
  return global_value(*this, minimizer());
}

QuadraticObjective quadratic_problem(std::size_t n, std::size_t p, Rng& rng) {
  std::vector<double> b(n * p);
  for (double& v : b) v = rng.uniform(-1.0, 1.0);
  return QuadraticObjective(n, p, std::move(b));
}

QuadraticObjective quadratic_problem(std::size_t n, std::size_t p, std::uint64_t seed) {
  Rng rng(seed);
  return quadratic_problem(n, p, rng);
}

}  // namespace neardgd
