#pragma once

#include <cstdint>
#include <span>

#include "pdd/constants.hpp"
#include "pdd/sde_engine.hpp"
#include "pdd/types.hpp"

namespace pdd {

/// Balanced design: statistical error = a/2 = |bias|, i.e.
/// N = ceil(4 q^2 V / a^2) and h = (a / (2|beta|))^{1/delta}.
struct BalancedParams {
  double a = 0.0;
  int q = 2;
  long n_paths = 0;
  double h = 0.0;
};

BalancedParams balanced_parameters(double a, int q, double v_phi, double beta_abs, double delta);

struct NodalEstimate {
  int node_id = 0;
  double value = 0.0;
  double variance = 0.0;  // realized variance of the estimator samples
  long n_paths = 0;
  double h = 0.0;
  double ci_half_width = 0.0;  // q sqrt(variance / n)
  long work_steps = 0;
  long flagged = 0;
  bool cv_mode = false;
  double realized_rho = 0.0;  // corr(phi, xi) when cv_mode
};

struct SolveNodeOptions {
  long n_min = 100;
  double h_max = 0.01;       // integrator stability guard
  double cv_safety = 1.25;   // inflates the predicted reduced variance
  std::uint64_t seed = 1;
  std::uint64_t phase = 0;
  int threads = 0;
  long max_steps = 10'000'000;
  double shrink_coefficient = 0.5826;
};

/// One balanced nodal solve. Plain mode sizes N from the fitted V[phi]; CV
/// mode from V[phi](1 - predicted_rho2) * safety and estimates mean(phi+xi).
/// Either way one top-up batch is run if the realized CI exceeds a/2.
NodalEstimate solve_node(const Vec2& position, int node_id, double a, int q,
                         const NodalConstants& constants, double delta,
                         const Coefficients& coefficients, const BoundaryMap& boundary,
                         const VecField* cv_gradient, double predicted_rho2,
                         const SolveNodeOptions& options);

/// Sample Pearson correlation; throws on fewer than 2 samples or zero
/// variance.
double pearson(std::span<const double> xs, std::span<const double> ys);

}  // namespace pdd
