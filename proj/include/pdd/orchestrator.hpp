#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "pdd/constants.hpp"
#include "pdd/geometry.hpp"
#include "pdd/interface_interp.hpp"
#include "pdd/nodal_mc.hpp"
#include "pdd/problem.hpp"
#include "pdd/scheduler.hpp"
#include "pdd/subdomain_solver.hpp"

namespace pdd {

struct PddRunConfig {
  int q = 2;
  double delta = 1.0;
  double rbf_shape = 0.0;    // 0: per-interface default
  double fd_spacing = 0.0;   // 0: derived from the finest tolerance / 10
  long n_min = 100;
  double h_max = 0.01;
  double cv_safety = 1.25;
  double rho2_fallback = 0.05;  // realized mean rho^2 below this reruns the level plain
  // Opt-in zeroth level: assemble a solution from the fitted nodal means and
  // feed its gradients to the coarsest Monte Carlo level as control variates.
  bool use_fitted_seed_level = false;
  std::uint64_t seed = 1;
  int threads = 0;
  long max_steps = 10'000'000;
  // Deterministic step-equivalent model for the subdomain-solve and
  // gradient-table costs.
  double pi_cost_per_unknown = 25.0;
  double pi_tilde_cost_per_unknown = 2.0;
};

/// One PDD level: nodal estimates, interface data and the glued deterministic
/// solution. Adjacent subdomains share the same interface interpolant, so the
/// composite solution is continuous across interfaces.
struct PddSolution {
  double a = 0.0;
  std::vector<NodalEstimate> estimates;
  std::vector<Interpolant> interface_data;  // one per interface
  std::vector<GridField> fields;            // one per subdomain
  std::vector<GradientTable> gradients;
  std::shared_ptr<const CompositeGradientField> gradient_field;
  bool cv_mode = false;
  bool fell_back_to_plain = false;
  double mean_abs_rho = 0.0;  // realized, CV levels only

  std::vector<double> nodal_values() const;
};

struct LevelLedger {
  double a = 0.0;
  bool cv_mode = false;
  bool fell_back_to_plain = false;
  long mc_steps_plain = 0;  // raw integrator visits in plain mode
  long mc_steps_cv = 0;     // raw integrator visits in CV mode
  double pi = 0.0;          // step equivalents of the subdomain pass
  double pi_tilde = 0.0;    // step equivalents of the gradient-table build
  double mean_abs_rho = 0.0;
  long flagged_paths = 0;

  double weighted_cost(double kappa) const {
    return static_cast<double>(mc_steps_plain) + kappa * static_cast<double>(mc_steps_cv) + pi +
           pi_tilde;
  }
};

/// Work accounting in integrator-step equivalents. Totals are recomputed from
/// the per-level parts, so conservation is exact by construction.
struct CostLedger {
  double kappa = 1.0;
  std::vector<LevelLedger> levels;
  long fit_steps = 0;

  long total_mc_steps() const;
  double total_weighted_cost() const;  // excludes fit_steps
};

/// Observed speedup: weighted cost of the plain reference over the weighted
/// cost of the cascade.
double observed_speedup(const CostLedger& plain_reference, const CostLedger& iter);

/// Deterministic tail of a PDD level: interface interpolation, subdomain
/// solves and gradient tables from given nodal values.
PddSolution assemble_solution(const Partition& partition, const Coefficients& coefficients,
                              const std::vector<double>& nodal_values, double rbf_shape,
                              double fd_spacing, int threads);

struct PlainRun {
  PddSolution solution;
  CostLedger ledger;
};

PlainRun run_plain_pdd(double a, const TestProblem& problem, const Partition& partition,
                       const std::vector<NodalConstants>& constants,
                       const GlobalConstants& globals, const PddRunConfig& config);

struct IterRun {
  std::vector<PddSolution> levels;  // coarse -> fine; back() is the target
  CostLedger ledger;
};

IterRun run_iter_pdd(const Schedule& schedule, const TestProblem& problem,
                     const Partition& partition, const std::vector<NodalConstants>& constants,
                     const GlobalConstants& globals, const PddRunConfig& config);

struct ErrorReport {
  double mean_nodal_error = 0.0;
  double sup_interface_error = 0.0;
  double sup_domain_error = 0.0;
  double sup_gradient_norm = 0.0;
};

ErrorReport error_report(const PddSolution& solution, const Partition& partition,
                         const ScalarField& exact_u, int probe_nx = 201, int probe_ny = 61);

}  // namespace pdd
