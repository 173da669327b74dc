#pragma once

#include <cmath>

namespace pdd {

/// Fitted per-node constants driving balanced simulations and scheduling.
/// K = 4 q^2 E[tau] (2|beta|)^{1/delta} is the nodal cost constant.
struct NodalConstants {
  int node_id = 0;
  double x = 0.0;
  double y = 0.0;

  double e_phi = 0.0;
  double se_e_phi = 0.0;
  double beta = 0.0;
  double se_beta = 0.0;
  double v_phi = 0.0;
  double se_v_phi = 0.0;
  double alpha = 0.0;
  double se_alpha = 0.0;
  double e_tau = 0.0;
  double se_e_tau = 0.0;
  double tau_slope = 0.0;  // bias slope of the exit-time cloud; stored, unused
  double se_tau_slope = 0.0;
  double k_cost = 0.0;

  double cov_phi_psibar = 0.0;
  double se_cov_phi_psibar = 0.0;
  double v_psibar = 0.0;
  double se_v_psibar = 0.0;
  double rho_phi_psibar = 0.0;

  bool psi_valid = false;  // psi-related constants were fitted
  bool valid = false;      // all requested fits converged
};

struct GlobalConstants {
  double delta = 1.0;  // weak convergence order of the integrator
  double kappa = 1.0;  // per-step overhead factor of control-variate mode
};

inline double nodal_cost_constant(int q, double e_tau, double beta_abs, double delta) {
  return 4.0 * q * q * e_tau * std::pow(2.0 * beta_abs, 1.0 / delta);
}

}  // namespace pdd
