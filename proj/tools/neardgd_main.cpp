#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "neardgd/cli.hpp"
#include "neardgd/error.hpp"

int main(int argc, char** argv) {
  using namespace neardgd;
  CLI::App app{"Decentralized nonconvex optimization simulator (NEAR-DGD and baselines)"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".";
  std::optional<std::uint64_t> seed;
  unsigned parallel = 1;

  auto add_common = [&](CLI::App* sub, bool config_required) {
    auto* opt = sub->add_option("--config", config_path, "run configuration (key = value)");
    if (config_required) opt->required();
    sub->add_option("--seed", seed, "overrides the configured seed");
  };

  auto* run = app.add_subcommand("run", "single run; writes a CSV trace");
  add_common(run, true);
  run->add_option("--out", out_dir, "output directory");

  auto* sweep = app.add_subcommand("sweep", "all (method, seed) pairs; writes long-format CSV");
  add_common(sweep, true);
  sweep->add_option("--out", out_dir, "output directory");
  sweep->add_option("--parallel", parallel, "worker threads")->check(CLI::PositiveNumber);

  auto* check = app.add_subcommand("check", "invariant and diagnostic suite on a small instance");
  add_common(check, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kValidation;
  }

  RunConfig cfg;
  try {
    const RunConfig base = check->parsed() ? cli::check_defaults() : RunConfig{};
    cfg = config_path.empty() ? base : load_config(config_path, base);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kValidation;
  }
  if (seed) {
    cfg.seed = *seed;
    if (sweep->parsed()) cfg.sweep_seeds = {*seed};
  }

  if (run->parsed()) return cli::cmd_run(cfg, out_dir, std::cout, std::cerr);
  if (sweep->parsed()) return cli::cmd_sweep(cfg, out_dir, parallel, std::cout, std::cerr);
  return cli::cmd_check(cfg, std::cout, std::cerr);
}
