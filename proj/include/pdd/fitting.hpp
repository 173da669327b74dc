#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pdd/constants.hpp"
#include "pdd/geometry.hpp"
#include "pdd/glm.hpp"
#include "pdd/problem.hpp"
#include "pdd/sde_engine.hpp"
#include "pdd/subdomain_solver.hpp"
#include "pdd/types.hpp"

namespace pdd {

struct FitParams {
  int m_timesteps = 100;  // cloud size, equispaced h
  long n_paths = 1000;    // realizations per timestep
  double h_min = 1e-3;
  double h_max = 1e-2;
  int q = 2;
  double delta = 1.0;
  long max_steps = 10'000'000;
  double shrink_coefficient = 0.5826;
};

/// Sample statistics of one fit cloud: per-timestep moments of phi, tau and
/// psi-bar from n_paths realizations each.
struct FitCloud {
  VecX h;           // descending
  VecX mean_phi;
  VecX var_phi;
  VecX mean_tau;
  VecX var_tau;
  VecX mean_psi;
  VecX var_psi;
  VecX mean_psi_phi;  // E[psi_bar * phi]
  long total_steps = 0;
};

FitCloud run_fit_cloud(const Vec2& position, int node_id, const Coefficients& coefficients,
                       const BoundaryMap& boundary, const VecField* psi_gradient,
                       const FitParams& params, std::uint64_t seed, int threads);

/// Regressions on a cloud: normal-identity fits for first moments, gamma-
/// identity fits for variances; assembles K and rho[phi, psi-bar].
NodalConstants fit_constants_from_cloud(int node_id, const Vec2& position, const FitCloud& cloud,
                                        const FitParams& params, bool with_psi);

NodalConstants fit_node_constants(int node_id, const Vec2& position,
                                  const Coefficients& coefficients, const BoundaryMap& boundary,
                                  const VecField* psi_gradient, const FitParams& params,
                                  std::uint64_t seed, int threads);

/// Wall-time ratio of control-variate stepping to plain stepping, median of
/// `repeats` runs of at least `min_steps` integrator steps each, floored at 1.
double estimate_kappa(const Coefficients& coefficients, const BoundaryMap& boundary,
                      const Vec2& start, const VecField& cv_gradient, long min_steps = 100'000,
                      int repeats = 5);

struct FitAllResult {
  std::vector<NodalConstants> nodes;
  GlobalConstants globals;
  std::vector<GridField> w_bar;
  std::vector<GradientTable> w_bar_gradients;
  long total_steps = 0;
};

/// Full constants pass: a first cloud sweep fixes the bias signs, the error
/// propagation fields w-bar are solved with them, and a second sweep over the
/// same trajectories accumulates psi-bar. kappa is measured unless pinned.
FitAllResult fit_all_constants(const TestProblem& problem, const Partition& partition,
                               const FitParams& params, double rbf_shape, double fd_spacing,
                               std::uint64_t seed, int threads,
                               std::optional<double> pinned_kappa = std::nullopt);

}  // namespace pdd
