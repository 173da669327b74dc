#pragma once

#include <span>
#include <vector>

#include "pdd/constants.hpp"

namespace pdd {

/// Deterministic subdomain-solve and table-build costs in integrator-step
/// equivalents.
struct PiCosts {
  double pi = 0.0;        // one deterministic pass over all subdomains
  double pi_tilde = 0.0;  // one gradient-table construction
};

/// Predicted squared correlation between the score at tolerance a0 and a
/// control variate built from a solution at tolerance a > a0:
///   rho^2 = r^2(a) - |alpha r(a) / beta| a0, clamped to [0, 1],
/// with r^2(a) = 1 - V[psi] a^2 (1 - rho^2[phi,psi]) / (4 V[phi]).
double sensitivity_rho2(double a, double a0, const NodalConstants& node);

/// Sum_i K_i V_i[phi] / a^{2 + 1/delta} + pi.
double plain_cost(double a, std::span<const NodalConstants> nodes, double delta,
                  const PiCosts& pi = {});

/// Cost of the CV-mode nodal solves alone at tolerance a_prev with tables
/// from tolerance a.
double cv_level_cost(double a_prev, double a, std::span<const NodalConstants> nodes, double kappa,
                     double delta);

/// Full pairwise cost: plain(a) + CV level at a_prev + 2 pi + pi_tilde.
double predicted_iter_cost(double a_prev, double a, std::span<const NodalConstants> nodes,
                           double kappa, double delta, const PiCosts& pi = {});

/// Log-grid scan over (a_j, 1000 a_j] (200 points) plus golden-section
/// refinement to 1e-3 relative; deterministic.
double optimize_next(double a_j, std::span<const NodalConstants> nodes, double kappa,
                     double delta);

struct ScheduleLevel {
  double a = 0.0;
  double level_cost = 0.0;      // marginal cost of this level in the cascade
  double pair_cost = 0.0;       // predicted cost of IterPDD(a, a_next); 0 on top level
  double mean_rho_abs = 0.0;    // predicted |rho| of this level's CV solves; 0 on top
  double pair_speedup = 0.0;    // S(a, a_next); 0 on top level
};

/// Tolerance cascade a_J > ... > a_1 > a_0, levels ordered coarse to fine
/// (the last entry is a0). J = 0 means a plain solve is predicted optimal.
struct Schedule {
  std::vector<ScheduleLevel> levels;
  double plain_cost_a0 = 0.0;
  double cumulative_cost = 0.0;
  double cumulative_speedup = 0.0;
  bool degenerate = false;  // optimizer ran into the search cap

  int cascade_length() const { return static_cast<int>(levels.size()) - 1; }  // J
  double a0() const { return levels.back().a; }
};

Schedule build_schedule(double a0, std::span<const NodalConstants> nodes, double kappa,
                        double delta, double stop_threshold, const PiCosts& pi = {});

}  // namespace pdd
