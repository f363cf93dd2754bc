#include "neardgd/config.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include "neardgd/error.hpp"

namespace neardgd {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

class LineError {
 public:
  explicit LineError(int line) : line_(line) {}
  [[noreturn]] void fail(const std::string& msg) const {
    throw ValidationError("config line " + std::to_string(line_) + ": " + msg);
  }

 private:
  int line_;
};

std::uint64_t to_u64(const std::string& v, const LineError& where) {
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    where.fail("expected a non-negative integer, got '" + v + "'");
  return out;
}

double to_real(const std::string& v, const LineError& where) {
  char* end = nullptr;
  errno = 0;
  const double out = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE)
    where.fail("expected a real number, got '" + v + "'");
  return out;
}

bool to_bool(const std::string& v, const LineError& where) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  where.fail("expected true|false, got '" + v + "'");
}

std::vector<std::uint64_t> to_seed_list(const std::string& v, const LineError& where) {
  std::vector<std::uint64_t> out;
  for (const auto& item : split_list(v)) {
    const auto dash = item.find('-');
    if (dash == std::string::npos) {
      out.push_back(to_u64(item, where));
      continue;
    }
    const auto lo = to_u64(trim(item.substr(0, dash)), where);
    const auto hi = to_u64(trim(item.substr(dash + 1)), where);
    if (hi < lo) where.fail("empty seed range '" + item + "'");
    for (auto s = lo; s <= hi; ++s) out.push_back(s);
  }
  return out;
}

std::string method_name(const Method& m) {
  const auto label = m.label();
  return label.substr(0, label.find(':'));
}

}  // namespace

RunConfig parse_config(std::string_view text, RunConfig base) {
  RunConfig c = std::move(base);
  std::istringstream is{std::string(text)};
  std::string raw;
  int lineno = 0;
  // method.name / method.t / method.period may come in any order.
  std::string m_name = method_name(c.method);
  std::uint64_t m_t = c.method.schedule.kind == Schedule::Kind::kFixed ? c.method.schedule.t : 1;
  std::uint64_t m_period =
      c.method.schedule.kind == Schedule::Kind::kDoubling ? c.method.schedule.period : 100;
  bool method_touched = false;
  int method_line = 0;

  while (std::getline(is, raw)) {
    ++lineno;
    const LineError where(lineno);
    std::string line = raw;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) where.fail("expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));

    if (value == "begin") {
      std::string block, b;
      bool closed = false;
      while (std::getline(is, b)) {
        ++lineno;
        if (trim(b) == "end") {
          closed = true;
          break;
        }
        block += b + "\n";
      }
      if (!closed) where.fail("block for '" + key + "' is missing 'end'");
      value = block;
    }

    if (key == "seed") c.seed = to_u64(value, where);
    else if (key == "problem.kind") {
      if (value != "quartic" && value != "quadratic")
        where.fail("problem.kind must be quartic|quadratic");
      c.problem.kind = value;
    } else if (key == "problem.n") c.problem.n = to_u64(value, where);
    else if (key == "problem.p") c.problem.p = to_u64(value, where);
    else if (key == "problem.index") c.problem.index = to_u64(value, where);
    else if (key == "problem.c") c.problem.c = to_real(value, where);
    else if (key == "graph.kind") {
      static const char* kinds[] = {"ring", "star", "complete", "erdos-renyi", "edges"};
      if (std::none_of(std::begin(kinds), std::end(kinds), [&](const char* k) { return value == k; }))
        where.fail("graph.kind must be ring|star|complete|erdos-renyi|edges");
      c.graph.kind = value;
    } else if (key == "graph.probability") c.graph.probability = to_real(value, where);
    else if (key == "graph.seed") {
      c.graph.seed = to_u64(value, where);
      c.graph.has_seed = true;
    } else if (key == "graph.edges") c.graph.edges = value;
    else if (key == "weights.rule") {
      try {
        c.weight_rule = parse_weight_rule(value);
      } catch (const ValidationError& e) {
        where.fail(e.what());
      }
    } else if (key == "weights.margin") c.margin = to_real(value, where);
    else if (key == "weights.ensure_pd") c.ensure_pd = to_bool(value, where);
    else if (key == "method.name") {
      m_name = value;
      method_touched = true;
      method_line = lineno;
    } else if (key == "method.t") {
      m_t = to_u64(value, where);
      method_touched = true;
    } else if (key == "method.period") {
      m_period = to_u64(value, where);
      method_touched = true;
    } else if (key == "run.alpha") c.alpha = to_real(value, where);
    else if (key == "run.budget") c.budget = to_u64(value, where);
    else if (key == "run.grad_tol") c.grad_tol = to_real(value, where);
    else if (key == "run.allow_large_step") c.allow_large_step = to_bool(value, where);
    else if (key == "run.box_radius") c.box_radius = to_real(value, where);
    else if (key == "cost.c_c") c.cost.c_c = to_real(value, where);
    else if (key == "cost.c_g") c.cost.c_g = to_real(value, where);
    else if (key == "output.trace") c.trace_file = value;
    else if (key == "output.sweep") c.sweep_file = value;
    else if (key == "output.summary") c.summary_file = value;
    else if (key == "sweep.methods") {
      c.sweep_methods.clear();
      for (const auto& m : split_list(value)) {
        try {
          c.sweep_methods.push_back(Method::parse(m));
        } catch (const ValidationError& e) {
          where.fail(e.what());
        }
      }
    } else if (key == "sweep.seeds") c.sweep_seeds = to_seed_list(value, where);
    else where.fail("unknown key '" + key + "'");
  }

  if (method_touched) {
    std::string spec = m_name;
    if (m_name == "near-dgd-t") spec += ":" + std::to_string(m_t);
    else if (m_name == "near-dgd-plus-doubling") spec += ":" + std::to_string(m_period);
    try {
      c.method = Method::parse(spec);
    } catch (const ValidationError& e) {
      LineError(method_line).fail(e.what());
    }
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), std::move(base));
}

std::string to_config_text(const RunConfig& c) {
  std::ostringstream os;
  os.precision(17);
  os << "seed = " << c.seed << "\n";
  os << "problem.kind = " << c.problem.kind << "\n";
  os << "problem.n = " << c.problem.n << "\n";
  os << "problem.p = " << c.problem.p << "\n";
  os << "problem.index = " << c.problem.index << "\n";
  os << "problem.c = " << c.problem.c << "\n";
  os << "graph.kind = " << c.graph.kind << "\n";
  os << "graph.probability = " << c.graph.probability << "\n";
  if (c.graph.has_seed) os << "graph.seed = " << c.graph.seed << "\n";
  if (!c.graph.edges.empty()) os << "graph.edges = begin\n" << c.graph.edges << "end\n";
  os << "weights.rule = " << to_string(c.weight_rule) << "\n";
  os << "weights.margin = " << c.margin << "\n";
  os << "weights.ensure_pd = " << (c.ensure_pd ? "true" : "false") << "\n";
  os << "method.name = " << method_name(c.method) << "\n";
  if (c.method.schedule.kind == Schedule::Kind::kFixed && c.method.kind == MethodKind::kNearDgd)
    os << "method.t = " << c.method.schedule.t << "\n";
  if (c.method.schedule.kind == Schedule::Kind::kDoubling)
    os << "method.period = " << c.method.schedule.period << "\n";
  os << "run.alpha = " << c.alpha << "\n";
  os << "run.budget = " << c.budget << "\n";
  os << "run.grad_tol = " << c.grad_tol << "\n";
  os << "run.allow_large_step = " << (c.allow_large_step ? "true" : "false") << "\n";
  os << "run.box_radius = " << c.box_radius << "\n";
  os << "cost.c_c = " << c.cost.c_c << "\n";
  os << "cost.c_g = " << c.cost.c_g << "\n";
  os << "output.trace = " << c.trace_file << "\n";
  os << "output.sweep = " << c.sweep_file << "\n";
  os << "output.summary = " << c.summary_file << "\n";
  if (!c.sweep_methods.empty()) {
    os << "sweep.methods = ";
    for (std::size_t i = 0; i < c.sweep_methods.size(); ++i)
      os << (i ? ", " : "") << c.sweep_methods[i].label();
    os << "\n";
  }
  if (!c.sweep_seeds.empty()) {
    os << "sweep.seeds = ";
    for (std::size_t i = 0; i < c.sweep_seeds.size(); ++i) os << (i ? ", " : "") << c.sweep_seeds[i];
    os << "\n";
  }
  return os.str();
}

Graph build_graph(const RunConfig& c, std::uint64_t seed) {
  const std::size_t n = c.problem.n;
  const auto& g = c.graph;
  if (g.kind == "ring") return build_ring(n);
  if (g.kind == "star") return build_star(n);
  if (g.kind == "complete") return build_complete(n);
  if (g.kind == "erdos-renyi") return build_erdos_renyi(n, g.probability, g.has_seed ? g.seed : seed);
  if (g.kind == "edges") return parse_edge_list(n, g.edges);
  throw ValidationError("unknown graph kind '" + g.kind + "'");
}

Experiment build_experiment(const RunConfig& c, std::uint64_t seed) {
  if (c.problem.n == 0 || c.problem.p == 0) throw ValidationError("problem.n and problem.p must be >= 1");
  if (!(c.alpha > 0.0)) throw ValidationError("run.alpha must be positive");
  if (!(c.margin > 0.0)) throw ValidationError("weights.margin must be positive");
  if (c.cost.c_c < 0.0 || c.cost.c_g < 0.0) throw ValidationError("cost constants must be >= 0");
  if (c.box_radius < 0.0) throw ValidationError("run.box_radius must be >= 0");

  Experiment e{nullptr, build_graph(c, seed), {}, nullptr, {}};
  if (!is_connected(e.graph)) throw ValidationError("graph is not connected");

  Rng rng(seed);
  const double radius = c.box_radius > 0.0 ? c.box_radius : 4.0;
  if (c.problem.kind == "quartic") {
    auto prob = sample_quartic_problem(c.problem.n, c.problem.p, c.problem.index, c.problem.c, rng);
    e.objective = std::make_unique<QuarticObjective>(std::move(prob), radius);
  } else {
    e.objective = std::make_unique<QuadraticObjective>(quadratic_problem(c.problem.n, c.problem.p, rng));
  }
  e.x0 = uniform_initial_point(c.problem.n, c.problem.p, rng);

  e.raw_weights = c.weight_rule == WeightRule::kMetropolis ? metropolis_weights(e.graph)
                                                           : max_degree_weights(e.graph);
  try {
    e.weights = std::make_unique<ConsensusMatrix>(
        c.ensure_pd ? ensure_positive_definite(e.raw_weights, e.graph, c.margin)
                    : ConsensusMatrix::create(e.raw_weights.matrix(), e.graph));
  } catch (const ContractViolation& err) {
    throw ValidationError(err.what());
  }

  const double limit = 2.0 / e.objective->lipschitz();
  if (!(c.alpha < limit) && !c.allow_large_step) {
    throw ValidationError("run.alpha = " + format_real(c.alpha) + " violates alpha < 2/L = " +
                          format_real(limit) + " (set run.allow_large_step = true to override)");
  }
  return e;
}

RunOptions run_options(const RunConfig& c, const Method& method) {
  RunOptions o;
  o.method = method;
  o.alpha = c.alpha;
  o.budget = c.budget;
  o.grad_tol = c.grad_tol;
  o.allow_large_step = c.allow_large_step;
  o.box_radius = c.box_radius;
  o.cost = c.cost;
  return o;
}

std::uint64_t hash_point(const StackedVector& v) {
  std::uint64_t h = 1469598103934665603ULL;
  for (double d : v.data()) {
    unsigned char bytes[sizeof(double)];
    std::memcpy(bytes, &d, sizeof d);
    for (unsigned char b : bytes) {
      h ^= b;
      h *= 1099511628211ULL;
    }
  }
  return h;
}

}  // namespace neardgd
