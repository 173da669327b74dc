#pragma once

#include "pdd/rng.hpp"

namespace pdd {

/// Confidence level for q = 1, 2, 3 sigma.
double p_q(int q);

/// Maximum-principle constant Q = exp[(sup||b|| / lambda) / d] - 1 for a
/// domain between parallel planes a distance d apart.
double gt_constant(double sup_b_norm, double lambda_min, double slab_width);

/// CDF of the maximum of s iid standard normals: Phi(x)^s, and its inverse.
double extreme_cdf(double x, long s);
double inverse_extreme_cdf(double p, long s);

struct GlobalErrorParams {
  double gamma_r = 1.0;  // interpolator overshoot constant, >= 1
  double q_max = 1.0;    // effective maximum-principle constant
  long s = 1;            // nodes per critical subdomain
  int q = 2;
};

/// Nodal tolerance enforcing a global error tolerance eps:
/// a0 = 2 eps / (gamma_R Q_max (1 + (2 sqrt(2)/q) erf^-1(2 P_q^{1/s} - 1))).
double a0_from_epsilon(double eps, const GlobalErrorParams& params);
/// The inverse map: the global tolerance a nodal tolerance a0 guarantees.
double epsilon_from_a0(double a0, const GlobalErrorParams& params);

struct GumbelParams {
  double location = 0.0;  // l_s = -Phi^-1(1/s)
  double scale = 0.0;     // b_s = 1/l_s
};

/// Limit parameters of the max-of-s-normals distribution. Throws for s <= 2
/// where the scale degenerates.
GumbelParams gumbel_params(long s);

/// One draw of max(N_1..N_s) via the inverse CDF (exact in distribution).
double sample_max_normal(long s, Rng& rng);

struct NsrParams {
  double ratio_kprime_over_kpp = 0.0;  // K'/K'' >= 0
  double gamma_r = 1.0;
  int q = 2;
  long s = 10;
  long sample_count = 100'000;
};

/// Simulated noise-to-signal ratio of the gradient-bound proxy: with
/// S = max of s normals and T = (r + 2 gamma S)^2,
///   NSR = sqrt(Var[T]) / (q^2 (r + gamma)^2 + E[T]),
/// in which any common scale of (K', K'') cancels.
double nsr_simulate(const NsrParams& params, Rng& rng);

}  // namespace pdd
