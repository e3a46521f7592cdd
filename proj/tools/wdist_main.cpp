#include <algorithm>
#include <iostream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "wdist/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"weighted generalized-function pairings for signed quadratic forms"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output_override;
  int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  double quad_tol_override = -1.0;
  long seed = 0;  // reserved; all current jobs are deterministic

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "job config (JSON)")->required();
    sub->add_option("--output", output_override, "override the output path");
    sub->add_option("--threads", threads, "worker threads for sweeps")
        ->check(CLI::PositiveNumber);
    sub->add_option("--quad-tol", quad_tol_override,
                    "override tolerances.quad_tol");
    sub->add_option("--seed", seed, "random seed (reserved)");
  };

  const char* names[] = {"pairing", "delta", "residue",
                         "laurent", "sweep",  "verify"};
  for (const char* name : names) add_common(app.add_subcommand(name));

  CLI11_PARSE(app, argc, argv);
  const std::string subcommand = app.get_subcommands().front()->get_name();

  try {
    wdist::cli::JobConfig cfg = wdist::cli::load_config(config_path);
    if (cfg.job != subcommand)
      throw wdist::DomainError("config job '" + cfg.job +
                               "' does not match subcommand '" + subcommand +
                               "'");
    if (quad_tol_override > 0.0) cfg.quad_tol = quad_tol_override;
    return wdist::cli::run_job(cfg, threads, output_override);
  } catch (const wdist::NoConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
