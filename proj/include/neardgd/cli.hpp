#pragma once

#include <filesystem>
#include <iosfwd>

#include "neardgd/config.hpp"

namespace neardgd::cli {

enum ExitCode : int {
  kOk = 0,
  kValidation = 1,
  kDivergence = 2,
  kCheckFailed = 3,
};

/// Single run: writes <out_dir>/<trace_file> and prints a one-line summary.
int cmd_run(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& out,
            std::ostream& err);

/// Every (method, seed) pair of cfg.sweep_methods x cfg.sweep_seeds. Methods
/// sharing a seed share the problem and the initial point. Writes the
/// long-format <sweep_file> (method, seed, k, ...) and <summary_file>.
int cmd_sweep(const RunConfig& cfg, const std::filesystem::path& out_dir, unsigned parallel,
              std::ostream& out, std::ostream& err);

/// Small instance used by `check` when no config is given: ring of 4 nodes,
/// p = 2, quartic, NEAR-DGD with t = 2.
RunConfig check_defaults();

/// Invariant and diagnostic suite; one PASS/FAIL/SKIP line per property.
int cmd_check(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace neardgd::cli
