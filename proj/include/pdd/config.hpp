#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "pdd/fitting.hpp"
#include "pdd/geometry.hpp"
#include "pdd/orchestrator.hpp"

namespace pdd {

/// Flat key=value run configuration with CLI-flag overrides. Exactly one of
/// a0 / eps must be set before a solve.
struct RunConfig {
  std::string problem = "paper-sec6";
  double xmin = 0.0, xmax = 4.0, ymin = 0.0, ymax = 1.0;
  int subdomains = 4;
  int nodes_per_interface = 6;
  int q = 2;
  double delta = 1.0;

  std::optional<double> a0;
  std::optional<double> eps;
  double gamma_r = 1.5;   // used with eps
  double q_max = 0.0;     // 0: derive from the problem coefficients
  long s_nodes = 0;       // 0: derive from the partition

  int fit_m = 100;
  long fit_n = 1000;
  double fit_h_min = 1e-3;
  double fit_h_max = 1e-2;

  double stop_threshold = 1.5;
  std::uint64_t seed = 12345;
  int threads = 0;
  std::string out_dir = ".";
  double kappa = 0.0;  // 0: measure; > 0: pinned (reproducible outputs)

  double rbf_shape = 0.0;
  double fd_spacing = 0.0;
  long n_min = 100;
  double h_max = 0.01;
  double cv_safety = 1.25;
  double rho2_fallback = 0.05;
  double pi_cost_per_unknown = 25.0;
  double pi_tilde_cost_per_unknown = 2.0;
  bool plain = false;
  bool fitted_seed_level = false;

  int sweep_count = 24;         // speedup-sweep grid size
  double sweep_max_factor = 100.0;

  Domain domain() const;
  FitParams fit_params() const;
  PddRunConfig run_params() const;
};

/// Parses key=value lines ('#' comments). Unknown keys are errors.
RunConfig parse_config(std::istream& is);
RunConfig load_config_file(const std::string& path);

/// Throws std::invalid_argument on inconsistent settings (both or neither of
/// a0/eps for a solve, non-positive counts, tolerance above the sanity cap).
void validate_config(const RunConfig& config, bool needs_tolerance);

/// The nodal tolerance to run at: a0 directly, or the eps mapping through the
/// global-error parameters.
double resolve_a0(const RunConfig& config, const TestProblem& problem);

}  // namespace pdd
