// Acceptance suite: one pass/fail line per criterion, exit 0 only if all
// pass. Heavy Monte Carlo fixtures (the fitted constants) are shared.

#include <chrono>
#include <cmath>
#include <cstring>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pdd/error_analysis.hpp"
#include "pdd/fitting.hpp"
#include "pdd/glm.hpp"
#include "pdd/interface_interp.hpp"
#include "pdd/nodal_mc.hpp"
#include "pdd/orchestrator.hpp"
#include "pdd/problem.hpp"
#include "pdd/rng.hpp"
#include "pdd/scheduler.hpp"
#include "pdd/special.hpp"
#include "pdd/util.hpp"

using namespace pdd;

namespace {

constexpr std::uint64_t kSeed = 20240813;

struct Fixture {
  TestProblem problem;
  Partition partition;
  FitAllResult fit;
  long fit_steps = 0;

  Fixture()
      : problem(paper_test_problem(make_domain(0, 4, 0, 1))),
        partition(build_partition(problem.bounds, 4, 6)) {
    FitParams params;  // cloud defaults: 100 timesteps x 1000 paths in [1e-3, 1e-2]
    const double spacing = default_fd_spacing(0.004);
    fit = fit_all_constants(problem, partition, params, 0.0, spacing, kSeed, 0);
    fit_steps = fit.total_steps;
  }
};

const Fixture& fixture() {
  static Fixture f;
  return f;
}

double mean_over_nodes(const std::vector<NodalConstants>& nodes,
                       const std::function<double(const NodalConstants&)>& f) {
  double s = 0.0;
  for (const auto& n : nodes) s += f(n);
  return s / static_cast<double>(nodes.size());
}

// --- criterion 1 -----------------------------------------------------------

bool criterion_nsr_table(std::ostream& log) {
  const std::vector<double> ratios{0.0, 1e-2, 1e-1, 1.0, 10.0, 100.0};
  const std::vector<long> ss{10, 100, 1000, 10'000, 100'000};
  const double gamma1[6][5] = {{.54, .31, .20, .15, .12},    {.54, .31, .20, .15, .12},
                               {.51, .29, .20, .15, .12},    {.30, .21, .15, .12, .10},
                               {.048, .037, .031, .027, .024},
                               {.0047, .0035, .0029, .0025, .0023}};
  const double gamma2[6][5] = {{.54, .31, .20, .15, .12},    {.54, .31, .21, .15, .12},
                               {.53, .30, .20, .15, .12},    {.40, .25, .18, .13, .11},
                               {.094, .073, .060, .052, .046},
                               {.0094, .0070, .0059, .0051, .0046}};
  double max_err = 0.0;
  for (int block = 0; block < 2; ++block) {
    const double gamma_r = block == 0 ? 1.0 : 2.0;
    for (int i = 0; i < 6; ++i) {
      for (int j = 0; j < 5; ++j) {
        NsrParams p;
        p.ratio_kprime_over_kpp = ratios[static_cast<std::size_t>(i)];
        p.gamma_r = gamma_r;
        p.q = 2;
        p.s = ss[static_cast<std::size_t>(j)];
        p.sample_count = 100'000;
        Rng rng(kSeed, rng_phase::kNsr, static_cast<std::uint64_t>(block * 6 + i),
                static_cast<std::uint64_t>(j), 0);
        const double got = nsr_simulate(p, rng);
        const double want = block == 0 ? gamma1[i][j] : gamma2[i][j];
        max_err = std::max(max_err, std::abs(got - want));
      }
    }
  }
  log << "max |sim - table| = " << max_err << " (tol 0.03)";
  return max_err <= 0.03;
}

// --- criterion 2 -----------------------------------------------------------

bool criterion_cv_identities(std::ostream& log) {
  const auto& fx = fixture();
  const AnalyticVecField grad(fx.problem.exact_grad_u);
  TrajectoryParams params;
  params.timestep = 1e-3;
  const Vec2 node = fx.partition.nodes[9].position;
  const BatchStats s = run_batch(node, params, fx.problem.coefficients, *fx.problem.boundary,
                                 &grad, nullptr, 100'000, BatchKey{kSeed, 100, 0, 0}, 0);
  const double v_phi = s.variance_of(BatchStats::kPhi);
  const double v_xi = s.variance_of(BatchStats::kXi);
  const double cov = s.covariance(BatchStats::kPhi, BatchStats::kXi);
  const double rho = s.correlation(BatchStats::kPhi, BatchStats::kXi);
  const double rel_var = std::abs(v_xi - v_phi) / v_phi;
  const double rel_cov = std::abs(cov + v_phi) / v_phi;
  log << "|V[xi]-V[phi]|/V = " << rel_var << ", |Cov+V|/V = " << rel_cov
      << ", |rho| = " << std::abs(rho);
  return rel_var <= 0.1 && rel_cov <= 0.1 && std::abs(rho) >= 0.98 &&
         std::abs(rho) <= 0.9959;
}

// --- criterion 3 -----------------------------------------------------------

bool criterion_weak_order(std::ostream& log) {
  const auto& fx = fixture();
  const AnalyticVecField grad(fx.problem.exact_grad_u);
  const int node_ids[3] = {3, 9, 15};
  bool ok = true;
  log << "slopes:";
  for (int nn = 0; nn < 3; ++nn) {
    const auto& node = fx.partition.nodes[node_ids[nn]];
    const double u_exact = fx.problem.exact_u(node.position);
    const double beta_abs = std::abs(fx.fit.nodes[node_ids[nn]].beta);
    VecX lh(5), lb(5);
    for (int k = 0; k < 5; ++k) {
      const double h = 1e-3 * std::pow(10.0, k / 4.0);
      TrajectoryParams params;
      params.timestep = h;
      // Size the batch so the statistical error resolves the bias at this h.
      const double target = std::max(1e-4, beta_abs * h / 5.0);
      long n = static_cast<long>(std::ceil(0.5 / (target * target)));
      n = std::clamp<long>(n, 20'000, 3'000'000);
      const BatchStats s =
          run_batch(node.position, params, fx.problem.coefficients, *fx.problem.boundary, &grad,
                    nullptr, n, BatchKey{kSeed, 101, static_cast<std::uint64_t>(node.id),
                                         static_cast<std::uint64_t>(k)},
                    0);
      const double bias = s.mean_of(BatchStats::kPhi) + s.mean_of(BatchStats::kXi) - u_exact;
      lh[k] = std::log(h);
      lb[k] = std::log(std::max(1e-12, std::abs(bias)));
    }
    const LineFit f = fit_normal_identity(lh, lb);
    log << " " << f.slope;
    ok = ok && f.slope >= 0.7 && f.slope <= 1.3;
  }
  return ok;
}

// --- criterion 4 -----------------------------------------------------------

bool criterion_exit_time(std::ostream& log) {
  const TestProblem disk = laplace_disk_problem();
  FitParams params;  // defaults
  const NodalConstants c = fit_node_constants(0, Vec2{0, 0}, disk.coefficients, *disk.boundary,
                                              nullptr, params, kSeed, 0);
  log << "E[tau] = " << c.e_tau << " +- " << c.se_e_tau << " (target 0.25)";
  return std::abs(c.e_tau - 0.25) <= 3.0 * c.se_e_tau;
}

// --- criterion 5 -----------------------------------------------------------

bool criterion_coverage(std::ostream& log) {
  const auto& fx = fixture();
  const int node_id = 9;
  const auto& node = fx.partition.nodes[node_id];
  const double exact = fx.problem.exact_u(node.position);
  const double a = 0.1;
  int hits = 0;
  for (int rep = 0; rep < 100; ++rep) {
    SolveNodeOptions opt;
    opt.seed = kSeed + 1000 + static_cast<std::uint64_t>(rep);
    opt.phase = 102;
    opt.threads = 0;
    const NodalEstimate est =
        solve_node(node.position, node_id, a, 2, fx.fit.nodes[node_id], 1.0,
                   fx.problem.coefficients, *fx.problem.boundary, nullptr, 0.0, opt);
    if (std::abs(est.value - exact) <= a) ++hits;
  }
  log << hits << "/100 within a = " << a << " (need >= 88)";
  return hits >= 88;
}

// --- criterion 6 -----------------------------------------------------------

bool criterion_variance_vs_coarse_accuracy(std::ostream& log) {
  const auto& fx = fixture();
  const std::vector<double> a1s{0.02, 0.10, 0.26, 0.62};
  const std::vector<double> paper_v{0.16, 0.17, 0.19, 0.47};
  GlobalConstants globals = fx.fit.globals;
  PddRunConfig cfg;
  cfg.seed = kSeed + 7;
  cfg.threads = 0;

  std::vector<double> v_sum(a1s.size(), 0.0);
  std::vector<double> rho_mean(a1s.size(), 0.0);
  for (std::size_t ia = 0; ia < a1s.size(); ++ia) {
    const PlainRun coarse =
        run_plain_pdd(a1s[ia], fx.problem, fx.partition, fx.fit.nodes, globals, cfg);
    const VecField* cv = coarse.solution.gradient_field.get();
    double vs = 0.0, rs = 0.0;
    for (int i = 0; i < fx.partition.node_count(); ++i) {
      TrajectoryParams params;
      // The exact-control-variate criterion pins the h0 of a0 = 0.01 at
      // 1e-3; the tabulated variances are read at the same step.
      params.timestep = 1e-3;
      const BatchStats s = run_batch(fx.partition.nodes[i].position, params,
                                     fx.problem.coefficients, *fx.problem.boundary, cv, nullptr,
                                     4000,
                                     BatchKey{kSeed, 103 + ia, static_cast<std::uint64_t>(i), 0},
                                     0);
      vs += s.variance_of(BatchStats::kPhi) + s.variance_of(BatchStats::kXi) +
            2.0 * s.covariance(BatchStats::kPhi, BatchStats::kXi);
      rs += std::abs(s.correlation(BatchStats::kPhi, BatchStats::kXi));
    }
    v_sum[ia] = vs / fx.partition.node_count();
    rho_mean[ia] = rs / fx.partition.node_count();
  }
  bool ok = true;
  log << "V[phi+xi]:";
  for (std::size_t ia = 0; ia < a1s.size(); ++ia) {
    log << " " << v_sum[ia];
    ok = ok && v_sum[ia] >= paper_v[ia] / 2.0 && v_sum[ia] <= paper_v[ia] * 2.0;
  }
  log << "; |rho|:";
  for (std::size_t ia = 0; ia < a1s.size(); ++ia) log << " " << rho_mean[ia];
  for (std::size_t ia = 0; ia + 1 < a1s.size(); ++ia) {
    ok = ok && v_sum[ia] <= v_sum[ia + 1] && rho_mean[ia] >= rho_mean[ia + 1];
  }
  return ok;
}

// --- criterion 7 -----------------------------------------------------------

bool criterion_scheduler(std::ostream& log) {
  const auto& fx = fixture();
  struct Expected {
    double a0;
    double a2, a1;
    double speedup;
  };
  const Expected expected[] = {{0.04, 0.92, 0.27, 13.93},
                               {0.02, 0.69, 0.18, 28.34},
                               {0.01, 0.53, 0.12, 57.42}};
  bool ok = true;
  for (const auto& e : expected) {
    const Schedule s = build_schedule(e.a0, fx.fit.nodes, fx.fit.globals.kappa,
                                      fx.fit.globals.delta, 1.5);
    log << "[a0=" << e.a0 << ": J=" << s.cascade_length();
    ok = ok && s.cascade_length() == 2;
    if (s.levels.size() == 3) {
      const double a2 = s.levels[0].a;
      const double a1 = s.levels[1].a;
      log << ", a2=" << a2 << ", a1=" << a1 << ", S=" << s.cumulative_speedup << "] ";
      ok = ok && std::abs(a2 - e.a2) <= 0.3 * e.a2 && std::abs(a1 - e.a1) <= 0.3 * e.a1;
      ok = ok && s.cumulative_speedup >= e.speedup / 2.0 &&
           s.cumulative_speedup <= e.speedup * 2.0;
      if (e.a0 == 0.04) {
        // Tabulated pairwise costs for this cascade: 3.38e5 and 1.54e7,
        // within a factor of 3 (fitted constants and geometry defaults).
        const double mid_pair = s.levels[1].pair_cost;
        const double final_pair = s.levels[2].pair_cost;
        log << "pairs=" << mid_pair << "/" << final_pair << " ";
        ok = ok && mid_pair >= 3.38e5 / 3.0 && mid_pair <= 3.38e5 * 3.0;
        ok = ok && final_pair >= 1.54e7 / 3.0 && final_pair <= 1.54e7 * 3.0;
      }
    } else {
      log << "] ";
    }
  }
  return ok;
}

// --- criterion 8 -----------------------------------------------------------

bool criterion_end_to_end(std::ostream& log) {
  const auto& fx = fixture();
  const double a0 = 0.04;
  const Schedule schedule = build_schedule(a0, fx.fit.nodes, fx.fit.globals.kappa,
                                           fx.fit.globals.delta, 1.5);
  PddRunConfig cfg;
  cfg.seed = kSeed + 21;
  cfg.threads = 0;
  const IterRun iter =
      run_iter_pdd(schedule, fx.problem, fx.partition, fx.fit.nodes, fx.fit.globals, cfg);
  PddRunConfig cfg_plain = cfg;
  cfg_plain.seed = kSeed + 22;
  const PlainRun plain =
      run_plain_pdd(a0, fx.problem, fx.partition, fx.fit.nodes, fx.fit.globals, cfg_plain);

  const double speedup = observed_speedup(plain.ledger, iter.ledger);
  const ErrorReport rep = error_report(iter.levels.back(), fx.partition, fx.problem.exact_u);
  const double rho_final = iter.levels.back().mean_abs_rho;
  log << "observed speedup = " << speedup << " (need >= 5), mean nodal error = "
      << rep.mean_nodal_error << " (need <= 0.04), final |rho| = " << rho_final;
  // The reported realized correlation at the final level is ~0.970 +- 0.02.
  return speedup >= 5.0 && rep.mean_nodal_error <= 0.04 && rho_final >= 0.95 &&
         rho_final <= 0.99 && !iter.levels.back().fell_back_to_plain;
}

// --- criterion 9 -----------------------------------------------------------

bool check_interpolator_properties(std::ostream& log) {
  std::vector<Vec2> centers(6);
  for (int i = 1; i <= 6; ++i) centers[i - 1] = Vec2{0.5, i / 7.0};
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  VecX a(6), b(6);
  for (int i = 0; i < 6; ++i) {
    a[i] = u(gen);
    b[i] = u(gen);
  }
  const Interpolant ia = fit_interpolant(centers, a, 0.2);
  const Interpolant ib = fit_interpolant(centers, b, 0.2);
  const Interpolant iab = fit_interpolant(centers, 2.0 * a - 0.5 * b, 0.2);
  for (int i = 0; i < 6; ++i) {
    if (std::abs(ia.eval(centers[i]) - a[i]) > 1e-8) {
      log << "exactness violated";
      return false;
    }
  }
  for (int g = 0; g <= 50; ++g) {
    const Vec2 x{0.5, g / 50.0};
    if (std::abs(iab.eval(x) - 2.0 * ia.eval(x) + 0.5 * ib.eval(x)) > 1e-8) {
      log << "linearity violated";
      return false;
    }
  }
  return true;
}

bool check_piecewise_overshoot(std::ostream& log) {
  std::vector<Vec2> centers(5);
  for (int i = 1; i <= 5; ++i) centers[i - 1] = Vec2{0.5, i / 6.0};
  auto rule = [&](const VecX& values) {
    return [centers, values](const Vec2& x) {
      const double t = x[1];
      if (t <= centers.front()[1]) return values[0];
      for (int i = 0; i + 1 < 5; ++i) {
        if (t <= centers[i + 1][1]) {
          const double w = (t - centers[i][1]) / (centers[i + 1][1] - centers[i][1]);
          return (1.0 - w) * values[i] + w * values[i + 1];
        }
      }
      return values[4];
    };
  };
  const auto est = overshoot_of_linear_rule(rule, centers, overshoot_grid(centers, 50));
  if (std::abs(est.gamma - 1.0) > 1e-12) {
    log << "piecewise overshoot " << est.gamma << " != 1";
    return false;
  }
  return true;
}

bool check_continuity(std::ostream& log) {
  const auto& fx = fixture();
  std::vector<double> values;
  for (const auto& n : fx.partition.nodes) values.push_back(fx.problem.exact_u(n.position));
  const PddSolution sol =
      assemble_solution(fx.partition, fx.problem.coefficients, values, 0.0, 1.0 / 32, 0);
  for (const auto& itf : fx.partition.interfaces) {
    for (int g = 1; g < 100; ++g) {
      const Vec2 x{itf.x, itf.ymin + itf.length() * g / 100.0};
      const double gap = std::abs(sol.fields[itf.left_subdomain].value_at(x) -
                                  sol.fields[itf.right_subdomain].value_at(x));
      if (gap > 1e-9) {
        log << "interface gap " << gap;
        return false;
      }
    }
  }
  return true;
}

bool check_a0_map(std::ostream& log) {
  GlobalErrorParams p;
  p.gamma_r = 1.5;
  p.q_max = 2.0;
  p.q = 2;
  p.s = 50;
  const double base = a0_from_epsilon(0.3, p);
  if (std::abs(a0_from_epsilon(0.6, p) - 2.0 * base) > 1e-12 * base) {
    log << "a0(eps) not linear";
    return false;
  }
  double prev = 1e300;
  for (long s : {10L, 100L, 1000L, 10'000L, 100'000L}) {
    p.s = s;
    const double a = a0_from_epsilon(0.3, p);
    if (!(a < prev)) {
      log << "a0 not decreasing in s";
      return false;
    }
    prev = a;
  }
  return true;
}

bool check_extreme_cdf_brute_force(std::ostream& log) {
  const long s = 100;
  const double x = inverse_extreme_cdf(0.955, s);
  std::mt19937_64 gen(161803);
  std::normal_distribution<double> nd;
  int below = 0;
  const int draws = 1'000'000;
  for (int i = 0; i < draws; ++i) {
    double m = -1e300;
    for (long j = 0; j < s; ++j) m = std::max(m, nd(gen));
    if (m < x) ++below;
  }
  const double p_hat = static_cast<double>(below) / draws;
  if (std::abs(p_hat - 0.955) > 0.01) {
    log << "extreme CDF off: " << p_hat;
    return false;
  }
  return true;
}

bool check_glm_recovery(std::ostream& log) {
  std::mt19937_64 gen(271828);
  std::normal_distribution<double> nd;
  int hits_n = 0, hits_g = 0;
  const long n_hat = 1000;
  for (int trial = 0; trial < 100; ++trial) {
    VecX x(20), y(20), v(20);
    std::gamma_distribution<double> gd((n_hat - 1) / 2.0, 2.0 * 4.0 / (n_hat - 1));
    for (int i = 0; i < 20; ++i) {
      x[i] = 0.001 + 0.0005 * i;
      y[i] = 1.0 + 5.0 * x[i] + 0.2 * nd(gen);
      v[i] = 1.0 * x[i] + gd(gen);
    }
    const LineFit fn = fit_normal_identity(x, y, 0.04);
    if (std::abs(fn.intercept - 1.0) <= 3.0 * fn.se_intercept) ++hits_n;
    const LineFit fg = fit_gamma_identity(x, v, (n_hat - 1) / 2.0);
    if (std::abs(fg.intercept - 4.0) <= 3.0 * fg.se_intercept) ++hits_g;
  }
  log << "normal " << hits_n << "/100, gamma " << hits_g << "/100";
  return hits_n >= 95 && hits_g >= 95;
}

bool check_reproducibility(std::ostream& log) {
  const auto& fx = fixture();
  TrajectoryParams params;
  params.timestep = 5e-3;
  const BatchKey key{kSeed, 104, 1, 0};
  const Vec2 start = fx.partition.nodes[4].position;
  const BatchStats s1 = run_batch(start, params, fx.problem.coefficients, *fx.problem.boundary,
                                  nullptr, nullptr, 4096, key, 1);
  const BatchStats s3 = run_batch(start, params, fx.problem.coefficients, *fx.problem.boundary,
                                  nullptr, nullptr, 4096, key, 3);
  if (s1.mean != s3.mean || s1.m2 != s3.m2 || s1.total_steps != s3.total_steps) {
    log << "thread-count dependence detected";
    return false;
  }
  return true;
}

bool check_fitted_variance_scale(std::ostream& log) {
  // The tabulated per-node score variances average about 4.9-5.45; the level
  // is geometry-dependent, so the same x/2 band as the variance criteria.
  const auto& fx = fixture();
  const double mean_v =
      mean_over_nodes(fx.fit.nodes, [](const NodalConstants& c) { return c.v_phi; });
  log << "mean fitted V[phi] = " << mean_v;
  return mean_v >= 2.45 && mean_v <= 10.9;
}

bool check_plain_run_costs(std::ostream& log) {
  // Reported reference workloads: ~6.6e4 integrator visits at a = 0.62 and
  // ~1.47e7 at a = 0.10, accepted within a factor of 3 either way; the mean
  // nodal error at a = 0.10 sits near 0.06.
  const auto& fx = fixture();
  PddRunConfig cfg;
  cfg.seed = kSeed + 33;
  cfg.threads = 0;
  const PlainRun coarse =
      run_plain_pdd(0.62, fx.problem, fx.partition, fx.fit.nodes, fx.fit.globals, cfg);
  const double steps_coarse = static_cast<double>(coarse.ledger.total_mc_steps());
  const PlainRun mid =
      run_plain_pdd(0.10, fx.problem, fx.partition, fx.fit.nodes, fx.fit.globals, cfg);
  const double steps_mid = static_cast<double>(mid.ledger.total_mc_steps());
  const double err_mid = error_report(mid.solution, fx.partition, fx.problem.exact_u)
                             .mean_nodal_error;
  log << "steps(0.62) = " << steps_coarse << ", steps(0.10) = " << steps_mid
      << ", mean nodal err(0.10) = " << err_mid;
  return steps_coarse >= 65989.0 / 3.0 && steps_coarse <= 65989.0 * 3.0 &&
         steps_mid >= 1.47e7 / 3.0 && steps_mid <= 1.47e7 * 3.0 && err_mid >= 0.01 &&
         err_mid <= 0.11;
}

bool check_ledger_conservation(std::ostream&) {
  CostLedger ledger;
  ledger.kappa = 1.7;
  LevelLedger a;
  a.mc_steps_plain = 12345;
  a.pi = 10.0;
  LevelLedger b;
  b.mc_steps_cv = 678;
  b.pi_tilde = 2.0;
  ledger.levels = {a, b};
  const double expect = 12345.0 + 10.0 + 1.7 * 678.0 + 2.0;
  return ledger.total_mc_steps() == 13023 &&
         std::abs(ledger.total_weighted_cost() - expect) <= 1e-12 * expect;
}

bool criterion_properties(std::ostream& log) {
  struct Prop {
    const char* name;
    std::function<bool(std::ostream&)> fn;
  };
  const Prop props[] = {
      {"interpolator", check_interpolator_properties},
      {"piecewise-overshoot", check_piecewise_overshoot},
      {"continuity", check_continuity},
      {"a0-map", check_a0_map},
      {"extreme-cdf", check_extreme_cdf_brute_force},
      {"glm-recovery", check_glm_recovery},
      {"reproducibility", check_reproducibility},
      {"ledger", check_ledger_conservation},
      {"fitted-variance-scale", check_fitted_variance_scale},
      {"plain-run-costs", check_plain_run_costs},
  };
  bool all = true;
  for (const auto& p : props) {
    std::ostringstream sub;
    const bool ok = p.fn(sub);
    log << p.name << (ok ? " ok" : " FAIL") << (sub.str().empty() ? "" : " (" + sub.str() + ")")
        << "; ";
    all = all && ok;
  }
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  if (argc > 1 && std::strcmp(argv[1], "--criterion") == 0 && argc > 2) {
    only = std::atoi(argv[2]);
  }
  struct Criterion {
    int id;
    const char* name;
    std::function<bool(std::ostream&)> fn;
  };
  const Criterion criteria[] = {
      {1, "NSR table reproduction", criterion_nsr_table},
      {2, "exact-control-variate identities", criterion_cv_identities},
      {3, "weak convergence order", criterion_weak_order},
      {4, "mean exit time via the fitter", criterion_exit_time},
      {5, "plain nodal coverage", criterion_coverage},
      {6, "variance reduction vs coarse accuracy", criterion_variance_vs_coarse_accuracy},
      {7, "scheduler cascades", criterion_scheduler},
      {8, "end-to-end observed speedup", criterion_end_to_end},
      {9, "property suites", criterion_properties},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    if (only != 0 && c.id != only) continue;
    const auto t0 = std::chrono::steady_clock::now();
    std::ostringstream log;
    bool ok = false;
    try {
      ok = c.fn(log);
    } catch (const std::exception& e) {
      log << "exception: " << e.what();
    }
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
    std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << c.id << ": " << c.name << " ("
              << log.str() << ") [" << dt.count() << " s]\n"
              << std::flush;
    if (!ok) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
