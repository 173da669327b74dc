#include "pdd/fitting.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "pdd/rng.hpp"
#include "pdd/util.hpp"

namespace pdd {

namespace {

VecX cloud_timesteps(const FitParams& p) {
  if (p.m_timesteps < 3) throw std::invalid_argument("fit cloud: need at least 3 timesteps");
  if (p.n_paths < 30) throw std::invalid_argument("fit cloud: need at least 30 paths per step");
  if (!(p.h_min > 0.0) || !(p.h_min < p.h_max)) {
    throw std::invalid_argument("fit cloud: bad timestep range");
  }
  VecX h(p.m_timesteps);
  for (int j = 0; j < p.m_timesteps; ++j) {
    h[j] = p.h_max - (p.h_max - p.h_min) * j / (p.m_timesteps - 1);
  }
  return h;
}

void fill_cloud_row(FitCloud& cloud, int j, const BatchStats& s) {
  cloud.mean_phi[j] = s.mean_of(BatchStats::kPhi);
  cloud.var_phi[j] = s.variance_of(BatchStats::kPhi);
  cloud.mean_tau[j] = s.mean_of(BatchStats::kTau);
  cloud.var_tau[j] = s.variance_of(BatchStats::kTau);
  cloud.mean_psi[j] = s.mean_of(BatchStats::kPsi);
  cloud.var_psi[j] = s.variance_of(BatchStats::kPsi);
  // Plain product mean: cov*(n-1)/n + mean*mean.
  const double n = static_cast<double>(s.n);
  cloud.mean_psi_phi[j] = s.covariance(BatchStats::kPsi, BatchStats::kPhi) * (n - 1.0) / n +
                          s.mean_of(BatchStats::kPsi) * s.mean_of(BatchStats::kPhi);
}

BatchStats cloud_batch(const Vec2& position, int node_id, const Coefficients& coefficients,
                       const BoundaryMap& boundary, const VecField* psi_gradient, double h,
                       int batch_index, const FitParams& params, std::uint64_t seed, int threads) {
  TrajectoryParams tp;
  tp.timestep = h;
  tp.max_steps = params.max_steps;
  tp.shrink_coefficient = params.shrink_coefficient;
  const BatchKey key{seed, rng_phase::kFit, static_cast<std::uint64_t>(node_id),
                     static_cast<std::uint64_t>(batch_index)};
  return run_batch(position, tp, coefficients, boundary, nullptr, psi_gradient, params.n_paths,
                   key, threads);
}

}  // namespace

FitCloud run_fit_cloud(const Vec2& position, int node_id, const Coefficients& coefficients,
                       const BoundaryMap& boundary, const VecField* psi_gradient,
                       const FitParams& params, std::uint64_t seed, int threads) {
  FitCloud cloud;
  cloud.h = cloud_timesteps(params);
  const int m = params.m_timesteps;
  cloud.mean_phi = cloud.var_phi = cloud.mean_tau = cloud.var_tau = cloud.mean_psi =
      cloud.var_psi = cloud.mean_psi_phi = VecX::Zero(m);
  std::vector<long> steps(m, 0);
  parallel_for(m, threads, [&](long j) {
    const BatchStats s = cloud_batch(position, node_id, coefficients, boundary, psi_gradient,
                                     cloud.h[j], static_cast<int>(j), params, seed, 1);
    fill_cloud_row(cloud, static_cast<int>(j), s);
    steps[j] = s.total_steps;
  });
  for (long s : steps) cloud.total_steps += s;
  return cloud;
}

NodalConstants fit_constants_from_cloud(int node_id, const Vec2& position, const FitCloud& cloud,
                                        const FitParams& params, bool with_psi) {
  NodalConstants c;
  c.node_id = node_id;
  c.x = position[0];
  c.y = position[1];

  VecX xs(cloud.h.size());
  for (int j = 0; j < xs.size(); ++j) xs[j] = std::pow(cloud.h[j], params.delta);
  const double shape = (params.n_paths - 1) / 2.0;
  const double n_hat = static_cast<double>(params.n_paths);
  bool ok = true;

  // First moments: normal-identity fits with the mean sample variance as the
  // common noise proxy.
  const LineFit phi_fit =
      fit_normal_identity(xs, cloud.mean_phi, cloud.var_phi.mean() / n_hat);
  c.e_phi = phi_fit.intercept;
  c.se_e_phi = phi_fit.se_intercept;
  c.beta = phi_fit.slope;
  c.se_beta = phi_fit.se_slope;

  const LineFit tau_fit =
      fit_normal_identity(xs, cloud.mean_tau, cloud.var_tau.mean() / n_hat);
  c.e_tau = tau_fit.intercept;
  c.se_e_tau = tau_fit.se_intercept;
  c.tau_slope = tau_fit.slope;
  c.se_tau_slope = tau_fit.se_slope;

  // Variances: gamma-identity fits; OLS handles degenerate all-but-zero data.
  auto variance_fit = [&](const VecX& v) -> LineFit {
    if ((v.array() > 0.0).all()) {
      try {
        return fit_gamma_identity(xs, v, shape);
      } catch (const std::exception&) {
        ok = false;
        return fit_normal_identity(xs, v);
      }
    }
    return fit_normal_identity(xs, v);
  };
  const LineFit vphi_fit = variance_fit(cloud.var_phi);
  c.v_phi = vphi_fit.intercept;
  c.se_v_phi = vphi_fit.se_intercept;
  c.alpha = vphi_fit.slope;
  c.se_alpha = vphi_fit.se_slope;

  c.k_cost = nodal_cost_constant(params.q, c.e_tau, std::abs(c.beta), params.delta);

  if (with_psi) {
    const LineFit psi_fit =
        fit_normal_identity(xs, cloud.mean_psi, cloud.var_psi.mean() / n_hat);
    const LineFit psiphi_fit = fit_normal_identity(xs, cloud.mean_psi_phi);
    c.cov_phi_psibar = psiphi_fit.intercept - psi_fit.intercept * c.e_phi;
    c.se_cov_phi_psibar = psiphi_fit.se_intercept +
                          std::abs(c.e_phi) * psi_fit.se_intercept +
                          std::abs(psi_fit.intercept) * c.se_e_phi;
    const LineFit vpsi_fit = variance_fit(cloud.var_psi);
    c.v_psibar = vpsi_fit.intercept;
    c.se_v_psibar = vpsi_fit.se_intercept;
    if (c.v_phi > 0.0 && c.v_psibar > 0.0) {
      c.rho_phi_psibar =
          std::clamp(c.cov_phi_psibar / std::sqrt(c.v_phi * c.v_psibar), -1.0, 1.0);
    } else {
      c.rho_phi_psibar = 0.0;
    }
    c.psi_valid = true;
  }

  c.valid = ok && std::isfinite(c.e_phi) && std::isfinite(c.beta) && std::isfinite(c.v_phi);
  return c;
}

NodalConstants fit_node_constants(int node_id, const Vec2& position,
                                  const Coefficients& coefficients, const BoundaryMap& boundary,
                                  const VecField* psi_gradient, const FitParams& params,
                                  std::uint64_t seed, int threads) {
  const FitCloud cloud =
      run_fit_cloud(position, node_id, coefficients, boundary, psi_gradient, params, seed, threads);
  return fit_constants_from_cloud(node_id, position, cloud, params, psi_gradient != nullptr);
}

double estimate_kappa(const Coefficients& coefficients, const BoundaryMap& boundary,
                      const Vec2& start, const VecField& cv_gradient, long min_steps,
                      int repeats) {
  using clock = std::chrono::steady_clock;
  TrajectoryParams tp;
  tp.timestep = 3e-3;

  auto time_mode = [&](const VecField* cv, std::uint64_t salt) {
    long steps = 0;
    long traj = 0;
    double sink = 0.0;
    const auto t0 = clock::now();
    while (steps < min_steps) {
      Rng rng(0xabcdef12u + salt, rng_phase::kKappa, 0, 0, static_cast<std::uint64_t>(traj++));
      const TrajectoryOutcome o =
          simulate_trajectory(start, tp, coefficients, boundary, cv, nullptr, rng);
      steps += std::max<long>(1, o.steps);
      sink += o.score;
    }
    const std::chrono::duration<double> dt = clock::now() - t0;
    // Keep the accumulated score alive so the loop is not optimized away.
    volatile double keep = sink;
    (void)keep;
    return dt.count() / static_cast<double>(steps);
  };

  std::vector<double> ratios;
  ratios.reserve(repeats);
  for (int r = 0; r < repeats; ++r) {
    const double plain = time_mode(nullptr, 2 * r);
    const double cv = time_mode(&cv_gradient, 2 * r + 1);
    ratios.push_back(cv / plain);
  }
  std::sort(ratios.begin(), ratios.end());
  const double median = ratios[ratios.size() / 2];
  return std::max(1.0, median);
}

FitAllResult fit_all_constants(const TestProblem& problem, const Partition& partition,
                               const FitParams& params, double rbf_shape, double fd_spacing,
                               std::uint64_t seed, int threads,
                               std::optional<double> pinned_kappa) {
  FitAllResult out;
  const int n = partition.node_count();
  const int m = params.m_timesteps;
  const Coefficients& coeffs = problem.coefficients;
  const BoundaryMap& boundary = *problem.boundary;

  // Pass 1: phi-only clouds over all (node, timestep) tasks; fixes the bias
  // signs needed by the error propagation fields.
  std::vector<FitCloud> clouds(n);
  const VecX hs = cloud_timesteps(params);
  for (auto& cl : clouds) {
    cl.h = hs;
    cl.mean_phi = cl.var_phi = cl.mean_tau = cl.var_tau = cl.mean_psi = cl.var_psi =
        cl.mean_psi_phi = VecX::Zero(m);
  }
  std::vector<long> task_steps(static_cast<std::size_t>(n) * m, 0);
  auto sweep = [&](const VecField* psi_gradient) {
    parallel_for(static_cast<long>(n) * m, threads, [&](long t) {
      const int node = static_cast<int>(t / m);
      const int j = static_cast<int>(t % m);
      const BatchStats s = cloud_batch(partition.nodes[node].position, node, coeffs, boundary,
                                       psi_gradient, hs[j], j, params, seed, 1);
      fill_cloud_row(clouds[node], j, s);
      task_steps[static_cast<std::size_t>(t)] = s.total_steps;
    });
    for (long s : task_steps) out.total_steps += s;
  };
  sweep(nullptr);

  std::vector<double> beta_signs(n, 1.0);
  for (int i = 0; i < n; ++i) {
    const NodalConstants c =
        fit_constants_from_cloud(i, partition.nodes[i].position, clouds[i], params, false);
    beta_signs[i] = c.beta >= 0.0 ? 1.0 : -1.0;
  }

  out.w_bar = solve_error_propagation(partition, coeffs, beta_signs, nullptr, params.q,
                                      fd_spacing, rbf_shape);
  out.w_bar_gradients.reserve(out.w_bar.size());
  for (const auto& f : out.w_bar) out.w_bar_gradients.push_back(gradient_table(f));
  CompositeGradientField psi_field(partition, out.w_bar_gradients);

  // Pass 2: identical substreams, now accumulating psi-bar alongside.
  sweep(&psi_field);

  out.nodes.reserve(n);
  for (int i = 0; i < n; ++i) {
    out.nodes.push_back(
        fit_constants_from_cloud(i, partition.nodes[i].position, clouds[i], params, true));
  }

  out.globals.delta = params.delta;
  if (pinned_kappa) {
    out.globals.kappa = std::max(1.0, *pinned_kappa);
  } else {
    out.globals.kappa =
        estimate_kappa(coeffs, boundary, partition.nodes[n / 2].position, psi_field);
  }
  return out;
}

}  // namespace pdd
