#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "neardgd/consensus.hpp"
#include "neardgd/linalg.hpp"
#include "neardgd/rng.hpp"

namespace neardgd {

/// Separable objective f(x) = sum_i f_i(x_i) over n nodes with local
/// dimension p. Evaluators are pure and thread-safe.
class Objective {
 public:
  virtual ~Objective() = default;

  virtual std::size_t nodes() const = 0;
  virtual std::size_t local_dim() const = 0;
  virtual double local_value(std::size_t node, std::span<const double> x) const = 0;
  virtual void local_gradient(std::size_t node, std::span<const double> x,
                              std::span<double> out) const = 0;
  virtual DenseSymMatrix local_hessian(std::size_t node, std::span<const double> x) const = 0;
  /// Gradient-Lipschitz constant used for steplength validation.
  virtual double lipschitz() const = 0;
  /// min_x sum_i f_i(x), when known in closed form.
  virtual std::optional<double> optimal_value() const { return std::nullopt; }
  virtual std::string name() const = 0;
};

double stacked_value(const Objective& f, const StackedVector& x);
StackedVector stacked_gradient(const Objective& f, const StackedVector& x);
/// Block-diagonal np x np Hessian.
DenseMatrix stacked_hessian(const Objective& f, const StackedVector& x);
/// sum_i f_i(x) at a single point x of dimension p.
double global_value(const Objective& f, std::span<const double> x);
std::vector<double> global_gradient(const Objective& f, std::span<const double> x);

/// f_i(x) = 1/2 x' Q^i x + 1/(4n) ||x||^4_{D_I},  D_I = c e_I e_I'.
struct QuadraticQuarticProblem {
  std::size_t n = 0;
  std::size_t p = 0;
  std::size_t index = 1;  ///< distinguished coordinate I, 1-based
  double c = 1.0;
  std::vector<double> q;  ///< diagonal of Q^i at q[i*p + j]

  std::size_t coord() const { return index - 1; }
  double q_at(std::size_t node, std::size_t j) const { return q[node * p + j]; }
  /// sum_i q^i_II
  double curvature_sum() const;
};

/// Throws ValidationError unless q^i_jj < 0 exactly when j = I, the sum of
/// q^i_II is negative, and c > 0.
void validate(const QuadraticQuarticProblem& prob);

double quartic_local_value(const QuadraticQuarticProblem& prob, std::size_t node,
                           std::span<const double> x);
std::vector<double> quartic_local_grad(const QuadraticQuarticProblem& prob, std::size_t node,
                                       std::span<const double> x);
DenseSymMatrix quartic_local_hessian(const QuadraticQuarticProblem& prob, std::size_t node,
                                     std::span<const double> x);
/// (+x*, -x*) with x* = (1/c) sqrt(-sum_i q^i_II) e_I.
std::pair<std::vector<double>, std::vector<double>> quartic_minimizers(
    const QuadraticQuarticProblem& prob);
double quartic_optimal_value(const QuadraticQuarticProblem& prob);

/// Diagonals drawn uniformly from (-1,0) at j = I and (0,1) elsewhere.
QuadraticQuarticProblem sample_quartic_problem(std::size_t n, std::size_t p, std::size_t index,
                                               double c, Rng& rng);
QuadraticQuarticProblem sample_quartic_problem(std::size_t n, std::size_t p, std::size_t index,
                                               double c, std::uint64_t seed);

/// Over-estimate of the gradient-Lipschitz constant on the box
/// ||x||_inf <= radius: max_i (max_j |q^i_jj| + 3 (c^2/n) radius^2).
double lipschitz_estimate(const QuadraticQuarticProblem& prob, double radius);

class QuarticObjective final : public Objective {
 public:
  /// `radius` is the trajectory box used for the Lipschitz estimate.
  QuarticObjective(QuadraticQuarticProblem prob, double radius);

  std::size_t nodes() const override { return prob_.n; }
  std::size_t local_dim() const override { return prob_.p; }
  double local_value(std::size_t node, std::span<const double> x) const override;
  void local_gradient(std::size_t node, std::span<const double> x,
                      std::span<double> out) const override;
  DenseSymMatrix local_hessian(std::size_t node, std::span<const double> x) const override;
  double lipschitz() const override { return lipschitz_; }
  std::optional<double> optimal_value() const override { return quartic_optimal_value(prob_); }
  std::string name() const override { return "quartic"; }

  const QuadraticQuarticProblem& problem() const { return prob_; }

 private:
  QuadraticQuarticProblem prob_;
  double lipschitz_;
};

/// f_i(x) = 1/2 ||x - b_i||^2; minimizer is the mean of the b_i, L = 1.
class QuadraticObjective final : public Objective {
 public:
  QuadraticObjective(std::size_t n, std::size_t p, std::vector<double> targets);

  std::size_t nodes() const override { return n_; }
  std::size_t local_dim() const override { return p_; }
  double local_value(std::size_t node, std::span<const double> x) const override;
  void local_gradient(std::size_t node, std::span<const double> x,
                      std::span<double> out) const override;
  DenseSymMatrix local_hessian(std::size_t node, std::span<const double> x) const override;
  double lipschitz() const override { return 1.0; }
  std::optional<double> optimal_value() const override;
  std::string name() const override { return "quadratic"; }

  std::vector<double> minimizer() const;
  std::span<const double> target(std::size_t node) const { return {b_.data() + node * p_, p_}; }

 private:
  std::size_t n_, p_;
  std::vector<double> b_;
};

/// Targets b_i drawn uniformly from [-1,1]^p.
QuadraticObjective quadratic_problem(std::size_t n, std::size_t p, Rng& rng);
QuadraticObjective quadratic_problem(std::size_t n, std::size_t p, std::uint64_t seed);

}  // namespace neardgd
