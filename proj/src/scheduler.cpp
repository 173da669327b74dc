#include "pdd/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pdd {

namespace {

double uncorrected_r2(double a, const NodalConstants& node) {
  if (!(node.v_phi > 0.0)) return 0.0;
  const double r2 =
      1.0 - node.v_psibar * a * a * (1.0 - node.rho_phi_psibar * node.rho_phi_psibar) /
                (4.0 * node.v_phi);
  return std::clamp(r2, 0.0, 1.0);
}

double discretization_penalty(double r, double a0, const NodalConstants& node) {
  if (node.alpha == 0.0 || r == 0.0) return 0.0;
  if (node.beta == 0.0) return std::numeric_limits<double>::infinity();
  return std::abs(node.alpha * r / node.beta) * a0;
}

void check_nodes(std::span<const NodalConstants> nodes) {
  if (nodes.empty()) throw std::invalid_argument("scheduler: no nodal constants");
  for (const auto& n : nodes) {
    if (!n.valid || !n.psi_valid) {
      throw std::invalid_argument("scheduler: node " + std::to_string(n.node_id) +
                                  " has incomplete constants");
    }
  }
}

}  // namespace

double sensitivity_rho2(double a, double a0, const NodalConstants& node) {
  if (!(a0 > 0.0) || !(a > a0)) {
    throw std::invalid_argument("sensitivity_rho2: requires a > a0 > 0");
  }
  const double r2 = uncorrected_r2(a, node);
  const double r = std::sqrt(r2);
  return std::clamp(r2 - discretization_penalty(r, a0, node), 0.0, 1.0);
}

double plain_cost(double a, std::span<const NodalConstants> nodes, double delta,
                  const PiCosts& pi) {
  if (!(a > 0.0)) throw std::invalid_argument("plain_cost: tolerance must be positive");
  const double expo = 2.0 + 1.0 / delta;
  double sum = 0.0;
  for (const auto& n : nodes) sum += n.k_cost * n.v_phi;
  return sum / std::pow(a, expo) + pi.pi;
}

double cv_level_cost(double a_prev, double a, std::span<const NodalConstants> nodes, double kappa,
                     double delta) {
  const double expo = 2.0 + 1.0 / delta;
  double sum = 0.0;
  for (const auto& n : nodes) {
    const double variance_factor = 1.0 - sensitivity_rho2(a, a_prev, n);
    sum += n.k_cost * n.v_phi * kappa * variance_factor;
  }
  return sum / std::pow(a_prev, expo);
}

double predicted_iter_cost(double a_prev, double a, std::span<const NodalConstants> nodes,
                           double kappa, double delta, const PiCosts& pi) {
  return plain_cost(a, nodes, delta) + cv_level_cost(a_prev, a, nodes, kappa, delta) +
         2.0 * pi.pi + pi.pi_tilde;
}

double optimize_next(double a_j, std::span<const NodalConstants> nodes, double kappa,
                     double delta) {
  if (!(a_j > 0.0)) throw std::invalid_argument("optimize_next: tolerance must be positive");
  constexpr int kGridPoints = 200;
  constexpr double kSpan = 1000.0;
  auto objective = [&](double a) { return predicted_iter_cost(a_j, a, nodes, kappa, delta); };

  int best = 0;
  double best_value = std::numeric_limits<double>::infinity();
  auto grid_at = [&](int k) { return a_j * std::pow(kSpan, (k + 1.0) / kGridPoints); };
  for (int k = 0; k < kGridPoints; ++k) {
    const double v = objective(grid_at(k));
    if (v < best_value) {
      best_value = v;
      best = k;
    }
  }
  double lo = best > 0 ? grid_at(best - 1) : std::nextafter(a_j, kSpan * a_j);
  double hi = best + 1 < kGridPoints ? grid_at(best + 1) : grid_at(kGridPoints - 1);
  if (lo >= hi) return grid_at(best);

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = objective(c);
  double fd = objective(d);
  while (hi - lo > 1e-3 * (0.5 * (lo + hi))) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = objective(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = objective(d);
    }
  }
  return 0.5 * (lo + hi);
}

Schedule build_schedule(double a0, std::span<const NodalConstants> nodes, double kappa,
                        double delta, double stop_threshold, const PiCosts& pi) {
  if (!(a0 > 0.0)) throw std::invalid_argument("build_schedule: a0 must be positive");
  if (!(stop_threshold > 1.0)) {
    throw std::invalid_argument("build_schedule: stop threshold must exceed 1");
  }
  check_nodes(nodes);

  Schedule s;
  s.plain_cost_a0 = plain_cost(a0, nodes, delta, pi);

  // Grow the cascade upward while adding a coarser level still pays. The
  // optimization and the stopping rule weigh nodal work only; the fixed
  // subdomain-solve costs enter the reported level costs separately.
  std::vector<double> tolerances{a0};  // fine -> coarse
  constexpr int kMaxLevels = 10;
  bool degenerate = false;
  for (int j = 0; j < kMaxLevels; ++j) {
    const double current = tolerances.back();
    const double cand = optimize_next(current, nodes, kappa, delta);
    if (cand >= 999.0 * current) degenerate = true;
    const double speedup =
        plain_cost(current, nodes, delta) / predicted_iter_cost(current, cand, nodes, kappa,
                                                                delta);
    if (!(speedup >= stop_threshold)) break;
    tolerances.push_back(cand);
  }
  s.degenerate = degenerate;

  // Assemble coarse -> fine rows. Every level pays one subdomain pass; every
  // level except the finest also pays one table build.
  const int J = static_cast<int>(tolerances.size()) - 1;
  for (int idx = J; idx >= 0; --idx) {
    ScheduleLevel lvl;
    lvl.a = tolerances[idx];
    if (idx == J) {
      lvl.level_cost = plain_cost(lvl.a, nodes, delta) + pi.pi;
    } else {
      const double coarse = tolerances[idx + 1];
      lvl.level_cost = cv_level_cost(lvl.a, coarse, nodes, kappa, delta) + pi.pi;
      lvl.pair_cost = predicted_iter_cost(lvl.a, coarse, nodes, kappa, delta, pi);
      lvl.pair_speedup = plain_cost(lvl.a, nodes, delta, pi) / lvl.pair_cost;
      double rho_sum = 0.0;
      for (const auto& n : nodes) rho_sum += std::sqrt(sensitivity_rho2(coarse, lvl.a, n));
      lvl.mean_rho_abs = rho_sum / static_cast<double>(nodes.size());
    }
    if (idx != 0) lvl.level_cost += pi.pi_tilde;
    s.levels.push_back(lvl);
  }
  for (const auto& lvl : s.levels) s.cumulative_cost += lvl.level_cost;
  s.cumulative_speedup = s.plain_cost_a0 / s.cumulative_cost;
  return s;
}

}  // namespace pdd
