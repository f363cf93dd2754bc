#include "neardgd/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include "neardgd/error.hpp"

namespace neardgd::cli {

namespace fs = std::filesystem;

namespace {

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ValidationError("cannot write '" + path.string() + "'");
  os << content;
}

std::string summary_line(const RunTrace& trace) {
  const auto& last = trace.records.back();
  std::ostringstream os;
  os << "method=" << trace.method << " status=" << to_string(trace.status)
     << " iterations=" << last.k << " f_err=" << format_real(last.f_err)
     << " grad_norm=" << format_real(last.grad_avg_norm) << " cost=" << format_real(last.cost);
  return os.str();
}

}  // namespace

int cmd_run(const RunConfig& cfg, const fs::path& out_dir, std::ostream& out, std::ostream& err) {
  RunTrace trace;
  try {
    const Experiment e = build_experiment(cfg, cfg.seed);
    trace = run(*e.objective, *e.weights, e.x0, run_options(cfg, cfg.method));
    std::ostringstream csv;
    write_trace_csv(csv, trace);
    write_file(out_dir / cfg.trace_file, csv.str());
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const std::logic_error& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  }
  out << summary_line(trace) << "\n";
  if (!trace.ok()) {
    err << "error: " << trace.message << "\n";
    return kDivergence;
  }
  return kOk;
}

int cmd_sweep(const RunConfig& cfg, const fs::path& out_dir, unsigned parallel, std::ostream& out,
              std::ostream& err) {
  if (cfg.sweep_methods.empty()) {
    err << "error: sweep.methods is empty\n";
    return kValidation;
  }
  const std::vector<std::uint64_t> seeds =
      cfg.sweep_seeds.empty() ? std::vector<std::uint64_t>{cfg.seed} : cfg.sweep_seeds;

  // One experiment per seed, shared read-only by every method.
  std::map<std::uint64_t, Experiment> experiments;
  try {
    for (auto s : seeds)
      if (!experiments.count(s)) experiments.emplace(s, build_experiment(cfg, s));
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  }

  struct Job {
    std::uint64_t seed;
    const Method* method;
    RunTrace trace;
    std::uint64_t x0_hash = 0;
    std::string error;
  };
  std::vector<Job> jobs;
  for (auto s : seeds)
    for (const auto& m : cfg.sweep_methods) jobs.push_back({s, &m, {}, 0, {}});

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      Job& job = jobs[j];
      const Experiment& e = experiments.at(job.seed);
      job.x0_hash = hash_point(e.x0);
      try {
        job.trace = run(*e.objective, *e.weights, e.x0, run_options(cfg, *job.method));
      } catch (const std::exception& ex) {
        job.error = ex.what();
      }
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(parallel, jobs.size()));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  std::map<std::uint64_t, std::uint64_t> hash_by_seed;
  std::ostringstream sweep, summary;
  sweep << "method,seed," << kTraceCsvHeader << '\n';
  summary << "method,seed,status,iterations,f_err,grad_avg_norm,dist_saddle,cost,x0_hash\n";
  for (const auto& job : jobs) {
    auto [it, inserted] = hash_by_seed.emplace(job.seed, job.x0_hash);
    if (!inserted && it->second != job.x0_hash) {
      err << "error: methods disagree on the initial point for seed " << job.seed << "\n";
      return kValidation;
    }
    const std::string label = job.method->label();
    if (!job.error.empty()) {
      err << "error: " << label << " seed " << job.seed << ": " << job.error << "\n";
      return kValidation;
    }
    for (const auto& r : job.trace.records)
      sweep << label << ',' << job.seed << ',' << format_trace_row(r) << '\n';
    const auto& last = job.trace.records.back();
    char hash[17];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(job.x0_hash));
    summary << label << ',' << job.seed << ',' << to_string(job.trace.status) << ',' << last.k << ','
            << format_real(last.f_err) << ',' << format_real(last.grad_avg_norm) << ','
            << format_real(last.dist_saddle) << ',' << format_real(last.cost) << ',' << hash << '\n';
    out << "seed=" << job.seed << ' ' << summary_line(job.trace) << "\n";
    if (!job.trace.ok()) err << "warning: " << label << " seed " << job.seed << ": " << job.trace.message << "\n";
  }
  try {
    write_file(out_dir / cfg.sweep_file, sweep.str());
    write_file(out_dir / cfg.summary_file, summary.str());
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  }
  return kOk;
}

RunConfig check_defaults() {
  RunConfig c;
  c.problem = {"quartic", 4, 2, 2, 1.0};
  c.method = Method::near_dgd(Schedule::fixed(2));
  c.budget = 300;
  c.seed = 7;
  return c;
}

namespace {

class CheckReport {
 public:
  explicit CheckReport(std::ostream& out) : out_(out) {}

  void pass(const std::string& name, const std::string& detail = {}) {
    out_ << "[PASS] " << name << (detail.empty() ? "" : ": " + detail) << "\n";
  }
  void fail(const std::string& name, const std::string& detail) {
    out_ << "[FAIL] " << name << ": " << detail << "\n";
    ++failures_;
  }
  void skip(const std::string& name, const std::string& why) {
    out_ << "[SKIP] " << name << ": " << why << "\n";
  }
  void expect(const std::string& name, bool ok, const std::string& detail) {
    ok ? pass(name, detail) : fail(name, detail);
  }
  /// Runs `body`; exceptions count as failures.
  void guarded(const std::string& name, const std::function<void()>& body) {
    try {
      body();
    } catch (const std::exception& e) {
      fail(name, e.what());
    }
  }
  int failures() const { return failures_; }

 private:
  std::ostream& out_;
  int failures_ = 0;
};

// Relative error of an analytic gradient against central differences, worst
// over `points` random points in [-1,1]^{np}.
double worst_fd_error(const std::function<double(const StackedVector&)>& value,
                      const std::function<StackedVector(const StackedVector&)>& grad,
                      std::size_t n, std::size_t p, Rng& rng, int points) {
  constexpr double h = 1e-5;
  double worst = 0.0;
  for (int k = 0; k < points; ++k) {
    StackedVector x = uniform_initial_point(n, p, rng);
    const StackedVector g = grad(x);
    StackedVector fd(n, p);
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double keep = x[j];
      x[j] = keep + h;
      const double up = value(x);
      x[j] = keep - h;
      const double down = value(x);
      x[j] = keep;
      fd[j] = (up - down) / (2.0 * h);
    }
    worst = std::max(worst, (g - fd).norm() / std::max(1.0, g.norm()));
  }
  return worst;
}

}  // namespace

int cmd_check(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  CheckReport rep(out);
  std::unique_ptr<Experiment> e;
  Graph graph = build_ring(3);
  try {
    graph = build_graph(cfg, cfg.seed);
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << "\n";
    return kValidation;
  }

  rep.expect("graph connected", is_connected(graph),
             std::to_string(graph.node_count()) + " nodes, " + std::to_string(graph.edge_count()) +
                 " edges");

  // Matrix invariants on the matrix the run would actually use.
  bool weights_ok = false;
  rep.guarded("consensus matrix invariants", [&] {
    const DenseSymMatrix raw = cfg.weight_rule == WeightRule::kMetropolis
                                   ? metropolis_weights(graph)
                                   : max_degree_weights(graph);
    DenseMatrix used = raw.matrix();
    if (cfg.ensure_pd) used = ensure_positive_definite(raw, graph, cfg.margin).weights().matrix();
    const auto bad = consensus_violations(used, graph);
    std::string detail;
    for (const auto& b : bad) detail += (detail.empty() ? "" : "; ") + b;
    weights_ok = bad.empty();
    rep.expect("consensus matrix invariants", weights_ok,
               weights_ok ? "symmetric, doubly stochastic, pattern exact, positive definite" : detail);
  });

  if (!weights_ok) {
    for (const char* name : {"objective gradient", "objective Hessian", "Lyapunov gradient",
                             "steplength", "sufficient descent", "x-update identity",
                             "consensus distance bound", "optimality gap bound",
                             "inertia correspondence"})
      rep.skip(name, "needs a valid consensus matrix");
    out << (rep.failures() ? "check: FAILED" : "check: ok") << "\n";
    return rep.failures() ? kCheckFailed : kOk;
  }

  RunConfig relaxed = cfg;
  relaxed.allow_large_step = true;  // the steplength check below reports it
  try {
    e = std::make_unique<Experiment>(build_experiment(relaxed, cfg.seed));
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << "\n";
    return kValidation;
  }
  const Objective& f = *e->objective;
  const ConsensusMatrix& w = *e->weights;
  const std::size_t n = f.nodes(), p = f.local_dim();
  const unsigned t = cfg.method.kind == MethodKind::kNearDgd && cfg.method.schedule.is_fixed()
                         ? cfg.method.schedule.t
                         : 2;
  Rng rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);

  rep.guarded("objective gradient", [&] {
    const double worst = worst_fd_error([&](const StackedVector& x) { return stacked_value(f, x); },
                                        [&](const StackedVector& x) { return stacked_gradient(f, x); },
                                        n, p, rng, 20);
    rep.expect("objective gradient", worst <= 1e-6, "worst relative FD error " + format_real(worst));
  });

  rep.guarded("objective Hessian", [&] {
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
      const StackedVector x = uniform_initial_point(n, p, rng);
      const StackedVector v = uniform_initial_point(n, p, rng);
      const auto hv = matvec(stacked_hessian(f, x), v.data());
      constexpr double h = 1e-5;
      StackedVector xp = x, xm = x;
      xp.axpy(h, v);
      xm.axpy(-h, v);
      const StackedVector fd = (1.0 / (2.0 * h)) * (stacked_gradient(f, xp) - stacked_gradient(f, xm));
      double diff = 0.0;
      for (std::size_t j = 0; j < hv.size(); ++j) diff += (hv[j] - fd[j]) * (hv[j] - fd[j]);
      worst = std::max(worst, std::sqrt(diff) / std::max(1.0, norm2(hv)));
    }
    rep.expect("objective Hessian", worst <= 1e-6, "worst relative FD error " + format_real(worst));
  });

  rep.guarded("Lyapunov gradient", [&] {
    const double worst = worst_fd_error(
        [&](const StackedVector& y) { return lyapunov_value(y, f, w, t, cfg.alpha); },
        [&](const StackedVector& y) { return lyapunov_grad(y, f, w, t, cfg.alpha); }, n, p, rng, 20);
    rep.expect("Lyapunov gradient", worst <= 1e-6, "worst relative FD error " + format_real(worst));
  });

  const double lip = f.lipschitz();
  const bool step_ok = cfg.alpha < 2.0 / lip;
  rep.expect("steplength", step_ok,
             "alpha = " + format_real(cfg.alpha) + ", 2/L = " + format_real(2.0 / lip));

  RunOptions opts = run_options(relaxed, Method::near_dgd(Schedule::fixed(t)));
  const RunTrace trace = run(f, w, e->x0, opts);
  if (!trace.ok()) {
    rep.fail("run", trace.message);
  }

  if (!step_ok) {
    rep.fail("sufficient descent", "alpha >= 2/L, descent constant rho is undefined");
  } else {
    std::size_t bad = 0;
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& r : trace.records) {
      bad += r.descent_violated ? 1 : 0;
      if (r.k > 0) worst = std::max(worst, r.descent_residual);
    }
    rep.expect("sufficient descent", bad == 0,
               std::to_string(bad) + " violations over " + std::to_string(trace.records.size() - 1) +
                   " steps, max residual " + format_real(worst));
  }

  {
    double worst = 0.0;
    for (const auto& r : trace.records) worst = std::max(worst, r.eq7_residual);
    rep.expect("x-update identity", worst <= 1e-10, "max |x_{k+1} - x_k + alpha grad L_t| = " + format_real(worst));
  }
  {
    std::size_t bad = 0;
    for (const auto& r : trace.records) bad += r.cons_dist > r.cons_bound + 1e-12 ? 1 : 0;
    rep.expect("consensus distance bound", bad == 0, std::to_string(bad) + " iterates above beta^t ||y_k||");
  }
  {
    const auto& last = trace.records.back();
    const double bound = optimality_gap_bound(w.beta(), t, n, lip, trace.max_y_norm);
    rep.expect("optimality gap bound", last.grad_avg_norm <= bound,
               "||grad f(xbar)|| = " + format_real(last.grad_avg_norm) + " <= " + format_real(bound));
  }
  rep.guarded("inertia correspondence", [&] {
    if (n * p > 2000) {
      rep.skip("inertia correspondence", "problem too large to materialize");
      return;
    }
    const StackedVector origin(n, p);
    const DenseSymMatrix hess = lyapunov_hessian(origin, f, w, t, cfg.alpha);
    const auto hs = sym_eigen(hess, false).eigenvalues;
    const auto dg = near_dgd_jacobian_eigenvalues(origin, f, w, t, cfg.alpha);
    const auto neg = std::count_if(hs.begin(), hs.end(), [](double v) { return v < 0.0; });
    const auto above = std::count_if(dg.begin(), dg.end(), [](double v) { return v > 1.0; });
    rep.expect("inertia correspondence", neg == above,
               std::to_string(neg) + " negative Hessian eigenvalues, " + std::to_string(above) +
                   " Jacobian eigenvalues above 1 at y = 0");
  });

  out << (rep.failures() ? "check: FAILED" : "check: ok") << "\n";
  return rep.failures() ? kCheckFailed : kOk;
}

}  // namespace neardgd::cli
