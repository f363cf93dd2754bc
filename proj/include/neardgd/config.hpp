#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "neardgd/consensus.hpp"
#include "neardgd/diagnostics.hpp"
#include "neardgd/graph.hpp"
#include "neardgd/objective.hpp"
#include "neardgd/optimizer.hpp"

namespace neardgd {

struct ProblemSpec {
  std::string kind = "quartic";  ///< quartic | quadratic
  std::size_t n = 12;
  std::size_t p = 4;
  std::size_t index = 4;  ///< quartic only, 1-based
  double c = 1.0;         ///< quartic only
};

struct GraphSpec {
  std::string kind = "ring";  ///< ring | star | complete | erdos-renyi | edges
  double probability = 0.5;   ///< erdos-renyi
  bool has_seed = false;
  std::uint64_t seed = 0;  ///< erdos-renyi; defaults to the run seed
  std::string edges;       ///< kind = edges: one "i j" per line
};

/// Everything needed to reproduce one run (or one sweep). Parsed from a flat
/// "key = value" file; see docs/example.conf for every key.
struct RunConfig {
  std::uint64_t seed = 1;
  ProblemSpec problem;
  GraphSpec graph;
  WeightRule weight_rule = WeightRule::kMetropolis;
  double margin = 0.1;
  bool ensure_pd = true;
  Method method = Method::near_dgd(Schedule::fixed(1));
  double alpha = 0.1;
  std::uint64_t budget = 1000;
  double grad_tol = 0.0;
  bool allow_large_step = false;
  double box_radius = 4.0;
  CostModel cost;
  std::string trace_file = "trace.csv";
  std::string sweep_file = "sweep.csv";
  std::string summary_file = "summary.csv";
  std::vector<Method> sweep_methods;
  std::vector<std::uint64_t> sweep_seeds;
};

/// Applies the keys in `text` on top of `base`. Throws ValidationError naming
/// the line on unknown keys or malformed values.
RunConfig parse_config(std::string_view text, RunConfig base = {});
RunConfig load_config(const std::filesystem::path& path, RunConfig base = {});

/// Serializes every key; parse_config(to_config_text(c)) reproduces c.
std::string to_config_text(const RunConfig& c);

/// Concrete objects for one (config, seed) pair. All randomness comes from
/// `seed`: the problem draw first, then the initial point.
struct Experiment {
  std::unique_ptr<Objective> objective;
  Graph graph;
  DenseSymMatrix raw_weights;  ///< before the positive-definite shift
  std::unique_ptr<ConsensusMatrix> weights;
  StackedVector x0;
};

Graph build_graph(const RunConfig& c, std::uint64_t seed);
/// Throws ValidationError / InvalidTopology on any constraint violation.
Experiment build_experiment(const RunConfig& c, std::uint64_t seed);
RunOptions run_options(const RunConfig& c, const Method& method);

/// FNV-1a over the bytes of the stacked vector.
std::uint64_t hash_point(const StackedVector& v);

}  // namespace neardgd
