#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "neardgd/consensus.hpp"
#include "neardgd/diagnostics.hpp"
#include "neardgd/objective.hpp"
#include "neardgd/rng.hpp"

namespace neardgd {

/// Consensus rounds per iteration, t(k) for k = 0, 1, 2, ...
struct Schedule {
  enum class Kind { kFixed, kLinear, kDoubling };

  Kind kind = Kind::kFixed;
  unsigned t = 1;            ///< kFixed
  std::uint64_t period = 100;  ///< kDoubling: iterations between doublings
  unsigned start = 1;        ///< kDoubling: initial rounds

  static Schedule fixed(unsigned t);
  /// t(k) = k + 1
  static Schedule linear();
  /// t(k) = start * 2^floor(k / period)
  static Schedule doubling(std::uint64_t period, unsigned start = 1);

  unsigned rounds(std::uint64_t k) const;
  bool is_fixed() const { return kind == Kind::kFixed; }
};

enum class MethodKind { kNearDgd, kDgd, kGradientTracking };

struct Method {
  MethodKind kind = MethodKind::kNearDgd;
  Schedule schedule;

  static Method near_dgd(Schedule s) { return {MethodKind::kNearDgd, s}; }
  static Method dgd() { return {MethodKind::kDgd, Schedule::fixed(1)}; }
  static Method gradient_tracking() { return {MethodKind::kGradientTracking, Schedule::fixed(2)}; }

  /// "near-dgd-t:5", "near-dgd-plus", "near-dgd-plus-doubling:100", "dgd",
  /// "gradient-tracking". Throws ValidationError.
  static Method parse(const std::string& spec);
  /// Inverse of parse().
  std::string label() const;
};

struct OptimizerState {
  std::uint64_t k = 0;
  StackedVector x;  ///< last post-consensus iterate (DGD/GT: the iterate itself)
  StackedVector y;  ///< NEAR-DGD post-gradient iterate
  double alpha = 0.1;
  CommCounter counter;
  // Gradient tracking only.
  StackedVector tracker;
  StackedVector last_grad;
  bool tracking_ready = false;
};

/// y_0 = x_0 = `x0`. Throws ValidationError unless alpha < 2/L, or warns on
/// stderr when `allow_large_step` is set.
OptimizerState make_state(const StackedVector& x0, const Objective& f, double alpha,
                          bool allow_large_step = false);

/// x_k = Z^{t(k)} y_k; y_{k+1} = x_k - alpha grad f(x_k).
OptimizerState near_dgd_step(const OptimizerState& s, const Objective& f, const ConsensusMatrix& w,
                             const Schedule& schedule);
/// x_{k+1} = Z x_k - alpha grad f(x_k).
OptimizerState dgd_step(const OptimizerState& s, const Objective& f, const ConsensusMatrix& w);
/// s_0 = grad f(x_0), charged as one gradient evaluation.
void init_gradient_tracking(OptimizerState& s, const Objective& f);
/// x_{k+1} = Z x_k - alpha s_k;  s_{k+1} = Z s_k + grad f(x_{k+1}) - grad f(x_k).
/// Two consensus rounds and one (cached) gradient evaluation.
OptimizerState gradient_tracking_step(const OptimizerState& s, const Objective& f,
                                      const ConsensusMatrix& w);

struct RunOptions {
  Method method;
  double alpha = 0.1;
  std::uint64_t budget = 1000;  ///< gradient evaluations
  double grad_tol = 0.0;        ///< stop when ||grad f(xbar)|| <= grad_tol; 0 disables
  bool allow_large_step = false;
  double box_radius = 4.0;  ///< ||x||_inf and ||y||_inf limit; 0 disables
  double divergence_threshold = 1e12;
  CostModel cost;
  /// Compute the Eq.-style x-update identity residual each fixed-t NEAR-DGD step.
  bool verify_identities = true;
};

/// Runs until the gradient budget or tolerance is reached. Never throws on
/// divergence; the trace status says what happened.
RunTrace run(const Objective& f, const ConsensusMatrix& w, const StackedVector& x0,
             const RunOptions& opts);

/// Uniform draw from [-1,1]^{np}.
StackedVector uniform_initial_point(std::size_t n, std::size_t p, Rng& rng);

}  // namespace neardgd
