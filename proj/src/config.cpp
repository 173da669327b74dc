#include "pdd/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "pdd/error_analysis.hpp"

namespace pdd {

Domain RunConfig::domain() const { return make_domain(xmin, xmax, ymin, ymax); }

FitParams RunConfig::fit_params() const {
  FitParams p;
  p.m_timesteps = fit_m;
  p.n_paths = fit_n;
  p.h_min = fit_h_min;
  p.h_max = fit_h_max;
  p.q = q;
  p.delta = delta;
  return p;
}

PddRunConfig RunConfig::run_params() const {
  PddRunConfig p;
  p.q = q;
  p.delta = delta;
  p.rbf_shape = rbf_shape;
  p.fd_spacing = fd_spacing;
  p.n_min = n_min;
  p.h_max = h_max;
  p.cv_safety = cv_safety;
  p.rho2_fallback = rho2_fallback;
  p.use_fitted_seed_level = fitted_seed_level;
  p.seed = seed;
  p.threads = threads;
  p.pi_cost_per_unknown = pi_cost_per_unknown;
  p.pi_tilde_cost_per_unknown = pi_tilde_cost_per_unknown;
  return p;
}

namespace {

bool parse_bool(const std::string& v) {
  if (v == "1" || v == "true" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "no") return false;
  throw std::invalid_argument("config: bad boolean '" + v + "'");
}

void apply_key(RunConfig& c, const std::string& key, const std::string& value) {
  auto d = [&] { return std::stod(value); };
  auto i = [&] { return std::stoi(value); };
  auto l = [&] { return std::stol(value); };
  if (key == "problem") c.problem = value;
  else if (key == "xmin") c.xmin = d();
  else if (key == "xmax") c.xmax = d();
  else if (key == "ymin") c.ymin = d();
  else if (key == "ymax") c.ymax = d();
  else if (key == "subdomains") c.subdomains = i();
  else if (key == "nodes_per_interface") c.nodes_per_interface = i();
  else if (key == "q") c.q = i();
  else if (key == "delta") c.delta = d();
  else if (key == "a0") c.a0 = d();
  else if (key == "eps") c.eps = d();
  else if (key == "gamma_r") c.gamma_r = d();
  else if (key == "q_max") c.q_max = d();
  else if (key == "s_nodes") c.s_nodes = l();
  else if (key == "fit_m") c.fit_m = i();
  else if (key == "fit_n") c.fit_n = l();
  else if (key == "fit_h_min") c.fit_h_min = d();
  else if (key == "fit_h_max") c.fit_h_max = d();
  else if (key == "stop_threshold") c.stop_threshold = d();
  else if (key == "seed") c.seed = std::stoull(value);
  else if (key == "threads") c.threads = i();
  else if (key == "out_dir") c.out_dir = value;
  else if (key == "kappa") c.kappa = d();
  else if (key == "rbf_shape") c.rbf_shape = d();
  else if (key == "fd_spacing") c.fd_spacing = d();
  else if (key == "n_min") c.n_min = l();
  else if (key == "h_max") c.h_max = d();
  else if (key == "cv_safety") c.cv_safety = d();
  else if (key == "rho2_fallback") c.rho2_fallback = d();
  else if (key == "pi_cost_per_unknown") c.pi_cost_per_unknown = d();
  else if (key == "pi_tilde_cost_per_unknown") c.pi_tilde_cost_per_unknown = d();
  else if (key == "plain") c.plain = parse_bool(value);
  else if (key == "fitted_seed_level") c.fitted_seed_level = parse_bool(value);
  else if (key == "sweep_count") c.sweep_count = i();
  else if (key == "sweep_max_factor") c.sweep_max_factor = d();
  else throw std::invalid_argument("config: unknown key '" + key + "'");
}

}  // namespace

RunConfig parse_config(std::istream& is) {
  RunConfig c;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    // trim
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const auto e = line.find_last_not_of(" \t\r");
    line = line.substr(b, e - b + 1);
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config: line " + std::to_string(lineno) + " has no '='");
    }
    auto strip = [](std::string s) {
      const auto b2 = s.find_first_not_of(" \t");
      if (b2 == std::string::npos) return std::string();
      const auto e2 = s.find_last_not_of(" \t");
      return s.substr(b2, e2 - b2 + 1);
    };
    apply_key(c, strip(line.substr(0, eq)), strip(line.substr(eq + 1)));
  }
  return c;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
  return parse_config(in);
}

void validate_config(const RunConfig& c, bool needs_tolerance) {
  if (!(c.xmin < c.xmax) || !(c.ymin < c.ymax)) {
    throw std::invalid_argument("config: degenerate domain bounds");
  }
  if (c.subdomains < 2) throw std::invalid_argument("config: subdomains must be >= 2");
  if (c.nodes_per_interface < 2) {
    throw std::invalid_argument("config: nodes_per_interface must be >= 2");
  }
  if (c.q < 1 || c.q > 3) throw std::invalid_argument("config: q must be 1, 2 or 3");
  if (!(c.delta > 0.0)) throw std::invalid_argument("config: delta must be positive");
  if (c.fit_m < 3 || c.fit_n < 30) throw std::invalid_argument("config: fit cloud too small");
  if (!(c.fit_h_min > 0.0) || !(c.fit_h_min < c.fit_h_max)) {
    throw std::invalid_argument("config: bad fit timestep range");
  }
  if (!(c.stop_threshold > 1.0)) {
    throw std::invalid_argument("config: stop_threshold must exceed 1");
  }
  if (needs_tolerance) {
    if (c.a0.has_value() == c.eps.has_value()) {
      throw std::invalid_argument("config: exactly one of a0 / eps must be set");
    }
    constexpr double kToleranceCap = 100.0;  // domain-scale sanity cap
    const double tol = c.a0 ? *c.a0 : *c.eps;
    if (!(tol > 0.0) || tol >= kToleranceCap) {
      throw std::invalid_argument("config: tolerance must lie in (0, 100)");
    }
  }
}

double resolve_a0(const RunConfig& config, const TestProblem& problem) {
  if (config.a0) return *config.a0;
  if (!config.eps) throw std::invalid_argument("resolve_a0: neither a0 nor eps set");

  GlobalErrorParams gep;
  gep.gamma_r = config.gamma_r;
  gep.q = config.q;
  gep.s = config.s_nodes > 0 ? config.s_nodes : 2L * config.nodes_per_interface;
  if (config.q_max > 0.0) {
    gep.q_max = config.q_max;
  } else {
    // Conservative default from the coefficients: slab width = strip width.
    const SpectralBounds sb = spectral_bounds(problem.coefficients, problem.bounds, 400);
    double sup_b = 0.0;
    const Domain& d = problem.bounds;
    for (int i = 0; i < 40; ++i) {
      for (int j = 0; j < 40; ++j) {
        const Vec2 x{d.xmin + d.width() * (i + 0.5) / 40.0,
                     d.ymin + d.height() * (j + 0.5) / 40.0};
        sup_b = std::max(sup_b, problem.coefficients.drift(x).norm());
      }
    }
    const double slab = problem.bounds.width() / config.subdomains;
    gep.q_max = std::max(1.0, gt_constant(sup_b, sb.lambda_min, slab));
  }
  return a0_from_epsilon(*config.eps, gep);
}

}  // namespace pdd
