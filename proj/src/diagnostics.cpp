#include "neardgd/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "neardgd/error.hpp"

namespace neardgd {

double lyapunov_value_at(const StackedVector& y, const StackedVector& x, const Objective& f,
                         double alpha) {
  return stacked_value(f, x) + (dot(y, x) - dot(x, x)) / (2.0 * alpha);
}

double lyapunov_value(const StackedVector& y, const Objective& f, const ConsensusMatrix& w,
                      unsigned t, double alpha) {
  if (!(alpha > 0.0)) throw ContractViolation("steplength must be positive");
  CommCounter scratch;
  const StackedVector x = apply_consensus(w, t, y, scratch);
  return lyapunov_value_at(y, x, f, alpha);
}

StackedVector lyapunov_grad(const StackedVector& y, const Objective& f, const ConsensusMatrix& w,
                            unsigned t, double alpha) {
  if (!(alpha > 0.0)) throw ContractViolation("steplength must be positive");
  CommCounter scratch;
  const StackedVector x = apply_consensus(w, t, y, scratch);
  // Z^t [grad f(x) + (y - x) / alpha]
  StackedVector inner = stacked_gradient(f, x);
  inner.axpy(1.0 / alpha, y);
  inner.axpy(-1.0 / alpha, x);
  return apply_consensus(w, t, inner, scratch);
}

LyapunovEval lyapunov(const StackedVector& y, const Objective& f, const ConsensusMatrix& w,
                      unsigned t, double alpha) {
  return {lyapunov_value(y, f, w, t, alpha), lyapunov_grad(y, f, w, t, alpha), t, alpha};
}

double rho_constant(std::span<const double> eigenvalues, unsigned t, double alpha,
                    double lipschitz) {
  if (!(alpha > 0.0) || !(alpha * lipschitz < 2.0)) {
    throw ContractViolation("sufficient descent needs 0 < alpha < 2/L (alpha = " +
                            format_real(alpha) + ", L = " + format_real(lipschitz) + ")");
  }
  double m = std::numeric_limits<double>::infinity();
  for (double lam : eigenvalues) {
    const double lt = std::pow(lam, static_cast<double>(t));
    m = std::min(m, lt * (1.0 + (1.0 - alpha * lipschitz) * lt));
  }
  return m / (2.0 * alpha);
}

double rho_constant(const ConsensusMatrix& w, unsigned t, double alpha, double lipschitz) {
  return rho_constant(w.spectrum().eigenvalues, t, alpha, lipschitz);
}

double descent_residual(const StackedVector& y, const StackedVector& y_next, const Objective& f,
                        const ConsensusMatrix& w, unsigned t, double alpha) {
  const double rho = rho_constant(w, t, alpha, f.lipschitz());
  const StackedVector step = y_next - y;
  return lyapunov_value(y_next, f, w, t, alpha) - lyapunov_value(y, f, w, t, alpha) +
         rho * dot(step, step);
}

double descent_slack(double lyapunov_value) {
  return 1e-10 * std::max(1.0, std::abs(lyapunov_value));
}

double consensus_distance(const StackedVector& x) {
  const auto mean = x.mean();
  double worst = 0.0;
  for (std::size_t i = 0; i < x.nodes(); ++i) {
    double s = 0.0;
    auto xi = x.node(i);
    for (std::size_t r = 0; r < xi.size(); ++r) s += (xi[r] - mean[r]) * (xi[r] - mean[r]);
    worst = std::max(worst, std::sqrt(s));
  }
  return worst;
}

double consensus_deviation(const StackedVector& x) {
  return (x - average_project(x)).norm();
}

double consensus_bound(double beta, unsigned t, double y_norm) {
  return std::pow(beta, static_cast<double>(t)) * y_norm;
}

double optimality_gap_bound(double beta, unsigned t, std::size_t n, double lipschitz, double b_y) {
  return std::pow(beta, static_cast<double>(t)) * std::sqrt(static_cast<double>(n)) * lipschitz *
         b_y;
}

namespace {

constexpr std::size_t kMaxMaterialized = 2000;

DenseMatrix stacked_consensus_power(const ConsensusMatrix& w, unsigned t, std::size_t p) {
  return kron_identity(matrix_power(w.weights().matrix(), t), p);
}

void require_small(const StackedVector& y) {
  if (y.size() > kMaxMaterialized) {
    throw ContractViolation("refusing to materialize a " + std::to_string(y.size()) +
                            "-dimensional Hessian (limit " + std::to_string(kMaxMaterialized) + ")");
  }
}

DenseMatrix symmetrized(const DenseMatrix& a) { return 0.5 * (a + a.transpose()); }

}  // namespace

DenseSymMatrix lyapunov_hessian(const StackedVector& y, const Objective& f,
                                const ConsensusMatrix& w, unsigned t, double alpha) {
  require_small(y);
  if (!(alpha > 0.0)) throw ContractViolation("steplength must be positive");
  const DenseMatrix zt = stacked_consensus_power(w, t, y.local_dim());
  CommCounter scratch;
  const DenseMatrix h = stacked_hessian(f, apply_consensus(w, t, y, scratch));
  const DenseMatrix eye = DenseMatrix::identity(y.size());
  DenseMatrix out = zt * h * zt + (1.0 / alpha) * (zt * (eye - zt));
  return DenseSymMatrix(symmetrized(out));
}

DenseMatrix near_dgd_jacobian(const StackedVector& y, const Objective& f, const ConsensusMatrix& w,
                              unsigned t, double alpha) {
  require_small(y);
  const DenseMatrix zt = stacked_consensus_power(w, t, y.local_dim());
  CommCounter scratch;
  const DenseMatrix h = stacked_hessian(f, apply_consensus(w, t, y, scratch));
  return zt * (DenseMatrix::identity(y.size()) - alpha * h);
}

std::vector<double> near_dgd_jacobian_eigenvalues(const StackedVector& y, const Objective& f,
                                                  const ConsensusMatrix& w, unsigned t,
                                                  double alpha) {
  require_small(y);
  const DenseMatrix half =
      kron_identity(spectral_power(w.spectrum(), 0.5 * static_cast<double>(t)), y.local_dim());
  CommCounter scratch;
  const DenseMatrix h = stacked_hessian(f, apply_consensus(w, t, y, scratch));
  const DenseMatrix s = half * (DenseMatrix::identity(y.size()) - alpha * h) * half;
  return sym_eigen(symmetrized(s), false).eigenvalues;
}

std::string to_string(SaddleKind kind) {
  switch (kind) {
    case SaddleKind::kMinimum: return "min";
    case SaddleKind::kStrictSaddle: return "strict-saddle";
    case SaddleKind::kIndefiniteTolerance: return "indefinite-tolerance";
  }
  return "?";
}

SaddleReport saddle_classification(const StackedVector& y, const Objective& f,
                                   const ConsensusMatrix& w, unsigned t, double alpha) {
  SaddleReport rep;
  rep.lyapunov_grad_norm = lyapunov_grad(y, f, w, t, alpha).norm();
  const double tol = 1e-6 * std::max(1.0, y.norm());
  if (rep.lyapunov_grad_norm > tol) {
    throw ContractViolation("saddle classification needs a near-critical point (||grad L_t|| = " +
                            format_real(rep.lyapunov_grad_norm) + " > " + format_real(tol) + ")");
  }
  const Spectrum hs = sym_eigen(lyapunov_hessian(y, f, w, t, alpha), false);
  rep.hessian_min_eigenvalue = hs.min();
  rep.negative_hessian_eigenvalues = static_cast<std::size_t>(
      std::count_if(hs.eigenvalues.begin(), hs.eigenvalues.end(), [](double v) { return v < 0.0; }));
  for (double v : near_dgd_jacobian_eigenvalues(y, f, w, t, alpha)) {
    rep.jacobian_max_abs_eigenvalue = std::max(rep.jacobian_max_abs_eigenvalue, std::abs(v));
    if (v > 1.0) ++rep.jacobian_eigenvalues_above_one;
  }
  constexpr double kDeadBand = 1e-8;
  if (rep.hessian_min_eigenvalue > kDeadBand) {
    rep.kind = SaddleKind::kMinimum;
  } else if (rep.hessian_min_eigenvalue < -kDeadBand) {
    rep.kind = SaddleKind::kStrictSaddle;
  } else {
    rep.kind = SaddleKind::kIndefiniteTolerance;
  }
  return rep;
}

double cumulative_cost(const CommCounter& counter, const CostModel& model) {
  return model.c_c * static_cast<double>(counter.consensus_rounds) +
         model.c_g * static_cast<double>(counter.gradient_evals);
}

std::string to_string(RunStatus status) {
  switch (status) {
    case RunStatus::kBudgetExhausted: return "budget";
    case RunStatus::kTolerance: return "tolerance";
    case RunStatus::kDiverged: return "diverged";
    case RunStatus::kLeftBox: return "left-box";
  }
  return "?";
}

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_trace_row(const TraceRecord& r) {
  std::string s;
  s += std::to_string(r.k) + ',' + std::to_string(r.t_k) + ',' + std::to_string(r.comms) + ',' +
       std::to_string(r.grads);
  for (double v : {r.f_err, r.grad_avg_norm, r.cons_dist, r.lyapunov, r.descent_residual,
                   r.dist_saddle, r.cost}) {
    s += ',';
    s += format_real(v);
  }
  return s;
}

void write_trace_csv(std::ostream& os, const RunTrace& trace) {
  os << kTraceCsvHeader << '\n';
  for (const auto& r : trace.records) os << format_trace_row(r) << '\n';
}

}  // namespace neardgd
