#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "wdist/core.hpp"
#include "wdist/testfn.hpp"

namespace wdist::cli {

struct JobConfig {
  // signature
  int p = 0;
  int q = 0;
  std::vector<double> gamma_plus;
  std::vector<double> gamma_minus;
  // test function
  std::vector<Term> phi_terms;
  // job selection
  std::string job;  // pairing | delta | residue | laurent | sweep | verify
  // parameters (job-dependent)
  Complex lambda{0.0, 0.0};
  int k = 0;
  std::string variant = "outer_r";  // outer_r | outer_s
  std::string series = "first";     // first | second
  double sweep_re_from = 0.0;
  double sweep_re_to = 1.0;
  int sweep_steps = 0;
  double sweep_im = 0.0;
  // tolerances (defaults always materialized on serialize)
  double quad_tol = 1e-9;
  double residue_tol = 1e-4;
  double pole_guard = kPoleGuard;
  double circle_rho = 0.1;
  int circle_m = 8;
  std::string output = "report.json";

  Signature signature() const;
  TestFunction test_function() const;
};

/// Strict parse: unknown keys are errors, signature invariants are enforced.
JobConfig parse_config(const nlohmann::json& doc);
JobConfig load_config(const std::string& path);
nlohmann::json serialize(const JobConfig& cfg);

/// Runs the configured job and writes the report files.  A non-empty
/// output_override redirects the file without touching the config echoed in
/// the report, so identical configs give byte-identical reports.  Returns the
/// process exit code: 0 ok, 2 no convergence, 3 verify failure.
int run_job(const JobConfig& cfg, int threads,
            const std::string& output_override = "");

}  // namespace wdist::cli
