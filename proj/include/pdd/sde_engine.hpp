#pragma once

#include <cstdint>

#include "pdd/geometry.hpp"
#include "pdd/problem.hpp"
#include "pdd/rng.hpp"
#include "pdd/subdomain_solver.hpp"
#include "pdd/types.hpp"

namespace pdd {

struct TrajectoryParams {
  double timestep = 1e-3;
  double shrink_coefficient = 0.5826;  // boundary-layer width factor
  long max_steps = 10'000'000;
};

/// One realization of the stopped diffusion and its functionals.
struct TrajectoryOutcome {
  double score = 0.0;            // phi_h = g(X_tau) Y_tau + Z_tau
  double control_variate = 0.0;  // xi_h; 0 when no gradient table is supplied
  double psi_bar = 0.0;          // auxiliary variate; 0 without w-bar tables
  double exit_time = 0.0;        // tau_h = steps * h
  long steps = 0;
  bool flagged = false;          // hit max_steps before exiting
};

/// Euler-Maruyama with boundary shrinking: the walk stops as soon as
/// d(X) > -0.5826 ||sigma^T N|| sqrt(h) and is projected onto the boundary.
/// One Wiener increment per step drives X, xi and psi alike. Requires
/// d(start) < 0.
TrajectoryOutcome simulate_trajectory(const Vec2& start, const TrajectoryParams& params,
                                      const Coefficients& coefficients,
                                      const BoundaryMap& boundary, const VecField* cv_gradient,
                                      const VecField* psi_gradient, Rng& rng);

/// Streaming first and second moments of (phi, xi, psi_bar, tau) over a
/// batch. Merges are fixed in chunk order, so statistics are bit-identical
/// for any thread count.
struct BatchStats {
  long n = 0;        // non-flagged realizations
  long flagged = 0;
  long total_steps = 0;  // includes steps spent on flagged paths
  Eigen::Vector4d mean = Eigen::Vector4d::Zero();
  Eigen::Matrix4d m2 = Eigen::Matrix4d::Zero();  // centered second-moment sums

  enum Component { kPhi = 0, kXi = 1, kPsi = 2, kTau = 3 };

  void add(const Eigen::Vector4d& x);
  void merge(const BatchStats& other);

  double mean_of(Component c) const { return mean[c]; }
  double variance_of(Component c) const { return n > 1 ? m2(c, c) / (n - 1) : 0.0; }
  double covariance(Component a, Component b) const { return n > 1 ? m2(a, b) / (n - 1) : 0.0; }
  /// Pearson correlation of two components; 0 when either variance vanishes.
  double correlation(Component a, Component b) const;
};

struct BatchKey {
  std::uint64_t seed = 0;
  std::uint64_t phase = 0;
  std::uint64_t node = 0;
  std::uint64_t batch = 0;
};

BatchStats run_batch(const Vec2& start, const TrajectoryParams& params,
                     const Coefficients& coefficients, const BoundaryMap& boundary,
                     const VecField* cv_gradient, const VecField* psi_gradient, long n,
                     const BatchKey& key, int threads);

}  // namespace pdd
