#include "neardgd/optimizer.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iostream>
#include <limits>

#include "neardgd/error.hpp"

namespace neardgd {

Schedule Schedule::fixed(unsigned t) {
  if (t == 0) throw ValidationError("consensus rounds per iteration must be >= 1");
  Schedule s;
  s.kind = Kind::kFixed;
  s.t = t;
  return s;
}

Schedule Schedule::linear() {
  Schedule s;
  s.kind = Kind::kLinear;
  return s;
}

Schedule Schedule::doubling(std::uint64_t period, unsigned start) {
  if (period == 0) throw ValidationError("doubling period must be >= 1");
  if (start == 0) throw ValidationError("doubling start must be >= 1");
  Schedule s;
  s.kind = Kind::kDoubling;
  s.period = period;
  s.start = start;
  return s;
}

unsigned Schedule::rounds(std::uint64_t k) const {
  constexpr std::uint64_t kCap = std::numeric_limits<unsigned>::max();
  switch (kind) {
    case Kind::kFixed:
      return t;
    case Kind::kLinear:
      return static_cast<unsigned>(std::min<std::uint64_t>(k + 1, kCap));
    case Kind::kDoubling: {
      const std::uint64_t doublings = k / period;
      std::uint64_t r = start;
      for (std::uint64_t d = 0; d < doublings && r < kCap; ++d) r *= 2;
      return static_cast<unsigned>(std::min(r, kCap));
    }
  }
  return 1;
}

namespace {

std::uint64_t parse_count(const std::string& text, const std::string& spec) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || v == 0)
    throw ValidationError("bad positive integer '" + text + "' in method '" + spec + "'");
  return v;
}

}  // namespace

Method Method::parse(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  auto no_arg = [&] {
    if (colon != std::string::npos) throw ValidationError("method '" + name + "' takes no parameter");
  };
  if (name == "near-dgd-t") {
    if (arg.empty()) throw ValidationError("near-dgd-t needs a round count, e.g. near-dgd-t:5");
    const auto t = parse_count(arg, spec);
    if (t > std::numeric_limits<unsigned>::max()) throw ValidationError("round count too large");
    return near_dgd(Schedule::fixed(static_cast<unsigned>(t)));
  }
  if (name == "near-dgd-plus") {
    no_arg();
    return near_dgd(Schedule::linear());
  }
  if (name == "near-dgd-plus-doubling") {
    return near_dgd(Schedule::doubling(arg.empty() ? 100 : parse_count(arg, spec)));
  }
  if (name == "dgd") {
    no_arg();
    return dgd();
  }
  if (name == "gradient-tracking") {
    no_arg();
    return gradient_tracking();
  }
  throw ValidationError("unknown method '" + spec +
                        "' (expected near-dgd-t:T, near-dgd-plus, near-dgd-plus-doubling:P, dgd, "
                        "gradient-tracking)");
}

std::string Method::label() const {
  switch (kind) {
    case MethodKind::kDgd: return "dgd";
    case MethodKind::kGradientTracking: return "gradient-tracking";
    case MethodKind::kNearDgd:
      switch (schedule.kind) {
        case Schedule::Kind::kFixed: return "near-dgd-t:" + std::to_string(schedule.t);
        case Schedule::Kind::kLinear: return "near-dgd-plus";
        case Schedule::Kind::kDoubling:
          return "near-dgd-plus-doubling:" + std::to_string(schedule.period);
      }
  }
  return "?";
}

OptimizerState make_state(const StackedVector& x0, const Objective& f, double alpha,
                          bool allow_large_step) {
  if (x0.nodes() != f.nodes() || x0.local_dim() != f.local_dim())
    throw DimensionMismatch("initial point shape does not match the objective");
  if (!(alpha > 0.0)) throw ValidationError("steplength must be positive");
  const double limit = 2.0 / f.lipschitz();
  if (!(alpha < limit)) {
    const std::string msg = "steplength alpha = " + format_real(alpha) +
                            " violates alpha < 2/L = " + format_real(limit);
    if (!allow_large_step) throw ValidationError(msg);
    std::cerr << "WARNING: " << msg << "; continuing because the steplength override is set\n";
  }
  OptimizerState s;
  s.x = x0;
  s.y = x0;
  s.alpha = alpha;
  return s;
}

OptimizerState near_dgd_step(const OptimizerState& s, const Objective& f, const ConsensusMatrix& w,
                             const Schedule& schedule) {
  OptimizerState next = s;
  next.x = apply_consensus(w, schedule.rounds(s.k), s.y, next.counter);
  next.y = next.x;
  next.y.axpy(-s.alpha, stacked_gradient(f, next.x));
  next.counter.gradient_evals += 1;
  next.k = s.k + 1;
  return next;
}

OptimizerState dgd_step(const OptimizerState& s, const Objective& f, const ConsensusMatrix& w) {
  OptimizerState next = s;
  const StackedVector grad = stacked_gradient(f, s.x);
  next.x = apply_consensus(w, 1, s.x, next.counter);
  next.x.axpy(-s.alpha, grad);
  next.y = next.x;
  next.counter.gradient_evals += 1;
  next.k = s.k + 1;
  return next;
}

void init_gradient_tracking(OptimizerState& s, const Objective& f) {
  s.last_grad = stacked_gradient(f, s.x);
  s.tracker = s.last_grad;
  s.counter.gradient_evals += 1;
  s.tracking_ready = true;
}

OptimizerState gradient_tracking_step(const OptimizerState& s, const Objective& f,
                                      const ConsensusMatrix& w) {
  if (!s.tracking_ready) throw ContractViolation("gradient tracker not initialized");
  OptimizerState next = s;
  next.x = apply_consensus(w, 1, s.x, next.counter);
  next.x.axpy(-s.alpha, s.tracker);
  next.last_grad = stacked_gradient(f, next.x);
  next.counter.gradient_evals += 1;
  next.tracker = apply_consensus(w, 1, s.tracker, next.counter);
  next.tracker += next.last_grad;
  next.tracker -= s.last_grad;
  next.y = next.x;
  next.k = s.k + 1;
  return next;
}

StackedVector uniform_initial_point(std::size_t n, std::size_t p, Rng& rng) {
  StackedVector x(n, p);
  for (double& v : x.data()) v = rng.uniform(-1.0, 1.0);
  return x;
}

namespace {

bool all_finite_below(const StackedVector& v, double threshold) {
  return std::all_of(v.data().begin(), v.data().end(),
                     [&](double a) { return std::isfinite(a) && std::abs(a) <= threshold; });
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

RunTrace run(const Objective& f, const ConsensusMatrix& w, const StackedVector& x0,
             const RunOptions& opts) {
  const Method& method = opts.method;
  const bool near = method.kind == MethodKind::kNearDgd;
  OptimizerState state = make_state(x0, f, opts.alpha, opts.allow_large_step);
  const double f_star = f.optimal_value().value_or(kNaN);
  const bool descent_defined = opts.alpha * f.lipschitz() < 2.0;

  RunTrace trace;
  trace.method = method.label();
  trace.max_y_norm = state.y.norm();

  if (method.kind == MethodKind::kGradientTracking && opts.budget > 0)
    init_gradient_tracking(state, f);

  // Carried from the previous record (NEAR-DGD only).
  unsigned prev_t = 0;
  double prev_lyapunov = 0.0;
  StackedVector prev_y, prev_x, prev_lyap_grad;
  bool have_prev_grad = false;
  bool halted = false;

  for (;;) {
    const unsigned t = near ? method.schedule.rounds(state.k) : method.schedule.t;
    const CommCounter before = state.counter;
    const StackedVector& cur = near ? state.y : state.x;
    const std::vector<double> xbar = cur.mean();
    const double gnorm = norm2(global_gradient(f, xbar));
    const bool tol_hit = opts.grad_tol > 0.0 && gnorm <= opts.grad_tol;
    const bool stepping = !halted && !tol_hit && before.gradient_evals < opts.budget;

    OptimizerState next;
    StackedVector x_k;
    if (stepping) {
      switch (method.kind) {
        case MethodKind::kNearDgd: next = near_dgd_step(state, f, w, method.schedule); break;
        case MethodKind::kDgd: next = dgd_step(state, f, w); break;
        case MethodKind::kGradientTracking: next = gradient_tracking_step(state, f, w); break;
      }
      x_k = near ? next.x : state.x;
    } else if (near) {
      CommCounter scratch;
      x_k = apply_consensus(w, t, state.y, scratch);
    } else {
      x_k = state.x;
    }

    TraceRecord rec;
    rec.k = state.k;
    rec.t_k = t;
    rec.comms = before.consensus_rounds;
    rec.grads = before.gradient_evals;
    rec.f_err = global_value(f, xbar) - f_star;
    rec.grad_avg_norm = gnorm;
    rec.cons_dist = consensus_distance(x_k);
    rec.dist_saddle = norm2(xbar);
    rec.cost = cumulative_cost(before, opts.cost);
    rec.y_norm = cur.norm();
    trace.max_y_norm = std::max(trace.max_y_norm, rec.y_norm);

    if (near) {
      rec.lyapunov = lyapunov_value_at(state.y, x_k, f, opts.alpha);
      rec.cons_bound = consensus_bound(w.beta(), t, rec.y_norm);
      if (state.k == 0) {
        rec.descent_residual = 0.0;
      } else {
        const double now = prev_t == t ? rec.lyapunov
                                       : lyapunov_value(state.y, f, w, prev_t, opts.alpha);
        // Outside alpha < 2/L there is no rho; report the bare Lyapunov change.
        const StackedVector dy = state.y - prev_y;
        const double rho =
            descent_defined ? rho_constant(w, prev_t, opts.alpha, f.lipschitz()) : 0.0;
        rec.descent_residual = now - prev_lyapunov + rho * dot(dy, dy);
        rec.descent_violated = rec.descent_residual > descent_slack(prev_lyapunov);
      }
      if (have_prev_grad && prev_t == t) {
        StackedVector r = x_k - prev_x;
        r.axpy(opts.alpha, prev_lyap_grad);
        rec.eq7_residual = norm_inf(r.data());
      }
      have_prev_grad = false;
      if (stepping && opts.verify_identities && method.schedule.is_fixed()) {
        prev_lyap_grad = lyapunov_grad(state.y, f, w, t, opts.alpha);
        have_prev_grad = true;
      }
      prev_t = t;
      prev_lyapunov = rec.lyapunov;
      prev_y = state.y;
      prev_x = x_k;
    } else {
      rec.lyapunov = kNaN;
      rec.descent_residual = kNaN;
      rec.cons_bound = kNaN;
    }
    trace.records.push_back(rec);

    if (!stepping) {
      if (!halted) trace.status = tol_hit ? RunStatus::kTolerance : RunStatus::kBudgetExhausted;
      trace.final_x = std::move(x_k);
      trace.final_y = state.y;
      break;
    }

    state = std::move(next);
    if (!all_finite_below(state.x, opts.divergence_threshold) ||
        !all_finite_below(state.y, opts.divergence_threshold)) {
      halted = true;
      trace.status = RunStatus::kDiverged;
      trace.message = "iterate exceeded " + format_real(opts.divergence_threshold) +
                      " or became non-finite at iteration " + std::to_string(state.k);
    } else if (opts.box_radius > 0.0 && (norm_inf(state.x.data()) > opts.box_radius ||
                                         norm_inf(state.y.data()) > opts.box_radius)) {
      halted = true;
      trace.status = RunStatus::kLeftBox;
      trace.message = "iterate left the trajectory box ||.||_inf <= " +
                      format_real(opts.box_radius) + " at iteration " + std::to_string(state.k);
    }
  }
  return trace;
}

}  // namespace neardgd
