#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "neardgd/consensus.hpp"
#include "neardgd/linalg.hpp"
#include "neardgd/objective.hpp"

namespace neardgd {

// Lyapunov function of the fixed-t method:
//   L_t(y) = f(Z^t y) + 1/(2 alpha) (||y||^2_{Z^t} - ||y||^2_{Z^{2t}}).
// With x = Z^t y and W symmetric, ||y||^2_{Z^{2t}} = ||x||^2, so every
// evaluation needs only t consensus rounds (2t for the gradient).

struct LyapunovEval {
  double value = 0.0;
  StackedVector grad;
  unsigned t = 1;
  double alpha = 0.0;
};

double lyapunov_value(const StackedVector& y, const Objective& f, const ConsensusMatrix& w,
                      unsigned t, double alpha);
/// Same value given x = Z^t y already in hand.
double lyapunov_value_at(const StackedVector& y, const StackedVector& x, const Objective& f,
                         double alpha);
/// Z^t grad f(Z^t y) + (1/alpha)(Z^t - Z^{2t}) y
StackedVector lyapunov_grad(const StackedVector& y, const Objective& f, const ConsensusMatrix& w,
                            unsigned t, double alpha);
LyapunovEval lyapunov(const StackedVector& y, const Objective& f, const ConsensusMatrix& w,
                      unsigned t, double alpha);

/// Sufficient-descent constant
///   rho = (2 alpha)^{-1} min_i lambda_i^t (1 + (1 - alpha L) lambda_i^t)
/// over the eigenvalues of W. Throws ContractViolation unless alpha < 2/L.
double rho_constant(std::span<const double> eigenvalues, unsigned t, double alpha, double lipschitz);
double rho_constant(const ConsensusMatrix& w, unsigned t, double alpha, double lipschitz);

/// L_t(y_next) - L_t(y) + rho ||y_next - y||^2. Nonpositive (up to round-off)
/// whenever alpha < 2/L.
double descent_residual(const StackedVector& y, const StackedVector& y_next, const Objective& f,
                        const ConsensusMatrix& w, unsigned t, double alpha);
/// Tolerance the residual is held to: 1e-10 * max(1, |L_t(y_k)|).
double descent_slack(double lyapunov_value);

/// max_i ||x_i - xbar||
double consensus_distance(const StackedVector& x);
/// ||x - M x|| over the whole stack.
double consensus_deviation(const StackedVector& x);
/// beta^t * y_norm; bounds both quantities above when x = Z^t y.
double consensus_bound(double beta, unsigned t, double y_norm);
/// beta^t sqrt(n) L B_y
double optimality_gap_bound(double beta, unsigned t, std::size_t n, double lipschitz, double b_y);

/// Z^t grad^2 f(Z^t y) Z^t + (1/alpha) Z^t (I - Z^t), materialized.
/// Refuses np > 2000.
DenseSymMatrix lyapunov_hessian(const StackedVector& y, const Objective& f,
                                const ConsensusMatrix& w, unsigned t, double alpha);
/// Jacobian of g(y) = Z^t y - alpha grad f(Z^t y): Z^t (I - alpha grad^2 f(Z^t y)).
DenseMatrix near_dgd_jacobian(const StackedVector& y, const Objective& f, const ConsensusMatrix& w,
                              unsigned t, double alpha);
/// Eigenvalues of near_dgd_jacobian, ascending. Dg is similar to the
/// symmetric Z^{t/2} (I - alpha H) Z^{t/2}, so its spectrum is real.
std::vector<double> near_dgd_jacobian_eigenvalues(const StackedVector& y, const Objective& f,
                                                  const ConsensusMatrix& w, unsigned t,
                                                  double alpha);

enum class SaddleKind { kMinimum, kStrictSaddle, kIndefiniteTolerance };
std::string to_string(SaddleKind kind);

struct SaddleReport {
  SaddleKind kind = SaddleKind::kIndefiniteTolerance;
  double hessian_min_eigenvalue = 0.0;
  std::size_t negative_hessian_eigenvalues = 0;
  double jacobian_max_abs_eigenvalue = 0.0;
  std::size_t jacobian_eigenvalues_above_one = 0;
  double lyapunov_grad_norm = 0.0;
};

/// Sign of lambda_1(grad^2 L_t(y)) with a +-1e-8 dead band. Requires
/// ||grad L_t(y)|| <= 1e-6 max(1, ||y||); throws ContractViolation otherwise.
SaddleReport saddle_classification(const StackedVector& y, const Objective& f,
                                   const ConsensusMatrix& w, unsigned t, double alpha);

struct CostModel {
  double c_c = 1.0;  ///< per consensus round
  double c_g = 1.0;  ///< per full-stack gradient evaluation
};

double cumulative_cost(const CommCounter& counter, const CostModel& model);

struct TraceRecord {
  std::uint64_t k = 0;
  std::uint64_t t_k = 0;
  std::uint64_t comms = 0;
  std::uint64_t grads = 0;
  double f_err = 0.0;
  double grad_avg_norm = 0.0;
  double cons_dist = 0.0;
  double lyapunov = 0.0;
  /// Step k-1 -> k measured with t = t(k-1): L_t(y_k) - L_t(y_{k-1}) + rho ||dy||^2,
  /// rho = 0 when alpha >= 2/L. Zero at k = 0.
  double descent_residual = 0.0;
  double dist_saddle = 0.0;
  double cost = 0.0;
  // Not written to CSV; consumed by verification code.
  double y_norm = 0.0;
  double cons_bound = 0.0;
  double eq7_residual = 0.0;  ///< ||x_k - x_{k-1} + alpha grad L_t(y_{k-1})||_inf
  bool descent_violated = false;
};

enum class RunStatus { kBudgetExhausted, kTolerance, kDiverged, kLeftBox };
std::string to_string(RunStatus status);

struct RunTrace {
  std::string method;
  std::vector<TraceRecord> records;
  RunStatus status = RunStatus::kBudgetExhausted;
  std::string message;
  StackedVector final_x;
  StackedVector final_y;
  double max_y_norm = 0.0;  ///< running max of ||y_k||, the B_y witness

  bool ok() const { return status == RunStatus::kBudgetExhausted || status == RunStatus::kTolerance; }
};

inline constexpr const char* kTraceCsvHeader =
    "k,t_k,comms,grads,f_err,grad_avg_norm,cons_dist,lyapunov,descent_residual,dist_saddle,cost";

/// %.17g, with nan/inf spelled the same on every platform.
std::string format_real(double v);
std::string format_trace_row(const TraceRecord& r);
void write_trace_csv(std::ostream& os, const RunTrace& trace);

}  // namespace neardgd
