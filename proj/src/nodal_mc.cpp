#include "pdd/nodal_mc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pdd {

BalancedParams balanced_parameters(double a, int q, double v_phi, double beta_abs, double delta) {
  if (!(a > 0.0) || !(v_phi > 0.0) || !(beta_abs > 0.0) || !(delta > 0.0) || q < 1) {
    throw std::invalid_argument("balanced_parameters: inputs must be positive");
  }
  BalancedParams p;
  p.a = a;
  p.q = q;
  p.n_paths = static_cast<long>(std::ceil(4.0 * q * q * v_phi / (a * a)));
  p.h = std::pow(a / (2.0 * beta_abs), 1.0 / delta);
  return p;
}

namespace {

struct EstimatorStats {
  double value;
  double variance;
};

EstimatorStats estimator_stats(const BatchStats& s, bool cv_mode) {
  if (!cv_mode) {
    return {s.mean_of(BatchStats::kPhi), s.variance_of(BatchStats::kPhi)};
  }
  const double value = s.mean_of(BatchStats::kPhi) + s.mean_of(BatchStats::kXi);
  const double variance = s.variance_of(BatchStats::kPhi) + s.variance_of(BatchStats::kXi) +
                          2.0 * s.covariance(BatchStats::kPhi, BatchStats::kXi);
  return {value, variance};
}

}  // namespace

NodalEstimate solve_node(const Vec2& position, int node_id, double a, int q,
                         const NodalConstants& constants, double delta,
                         const Coefficients& coefficients, const BoundaryMap& boundary,
                         const VecField* cv_gradient, double predicted_rho2,
                         const SolveNodeOptions& options) {
  if (!(a > 0.0)) throw std::invalid_argument("solve_node: tolerance must be positive");
  const bool cv_mode = cv_gradient != nullptr;
  const double rho2 = std::clamp(predicted_rho2, 0.0, 1.0);
  const double v_target =
      cv_mode ? constants.v_phi * (1.0 - rho2) * options.cv_safety : constants.v_phi;

  long n = options.n_min;
  if (v_target > 0.0) {
    n = std::max<long>(options.n_min,
                       static_cast<long>(std::ceil(4.0 * q * q * v_target / (a * a))));
  }
  double h = options.h_max;
  const double beta_abs = std::abs(constants.beta);
  if (beta_abs > 0.0) {
    h = std::min(options.h_max, std::pow(a / (2.0 * beta_abs), 1.0 / delta));
  }

  TrajectoryParams params;
  params.timestep = h;
  params.max_steps = options.max_steps;
  params.shrink_coefficient = options.shrink_coefficient;

  BatchKey key{options.seed, options.phase, static_cast<std::uint64_t>(node_id), 0};
  BatchStats stats = run_batch(position, params, coefficients, boundary, cv_gradient, nullptr, n,
                               key, options.threads);
  auto est = estimator_stats(stats, cv_mode);
  double ci = q * std::sqrt(std::max(0.0, est.variance) / stats.n);

  if (ci > 0.5 * a) {
    // One top-up from the realized variance, then accept whatever CI results.
    const long n_needed = static_cast<long>(std::ceil(4.0 * q * q * est.variance / (a * a)));
    const long extra = n_needed - stats.n;
    if (extra > 1) {
      key.batch = 1;
      BatchStats top = run_batch(position, params, coefficients, boundary, cv_gradient, nullptr,
                                 extra, key, options.threads);
      stats.merge(top);
      est = estimator_stats(stats, cv_mode);
      ci = q * std::sqrt(std::max(0.0, est.variance) / stats.n);
    }
  }

  NodalEstimate out;
  out.node_id = node_id;
  out.value = est.value;
  out.variance = est.variance;
  out.n_paths = stats.n;
  out.h = h;
  out.ci_half_width = ci;
  out.work_steps = stats.total_steps;
  out.flagged = stats.flagged;
  out.cv_mode = cv_mode;
  out.realized_rho = cv_mode ? stats.correlation(BatchStats::kPhi, BatchStats::kXi) : 0.0;
  return out;
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw std::invalid_argument("pearson: size mismatch");
  const std::size_t n = xs.size();
  if (n < 2) throw std::invalid_argument("pearson: need at least 2 samples");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) {
    throw std::invalid_argument("pearson: zero variance");
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace pdd
