#include "pdd/error_analysis.hpp"

#include <cmath>
#include <stdexcept>

#include "pdd/special.hpp"

namespace pdd {

double p_q(int q) {
  switch (q) {
    case 1: return 0.683;
    case 2: return 0.955;
    case 3: return 0.997;
    default: throw std::invalid_argument("p_q: q must be 1, 2 or 3");
  }
}

double gt_constant(double sup_b_norm, double lambda_min, double slab_width) {
  if (!(lambda_min > 0.0) || !(slab_width > 0.0) || sup_b_norm < 0.0) {
    throw std::invalid_argument("gt_constant: inputs must be positive");
  }
  return std::expm1((sup_b_norm / lambda_min) / slab_width);
}

double extreme_cdf(double x, long s) {
  if (s < 1) throw std::invalid_argument("extreme_cdf: s must be >= 1");
  return std::pow(norm_cdf(x), static_cast<double>(s));
}

double inverse_extreme_cdf(double p, long s) {
  if (s < 1) throw std::invalid_argument("inverse_extreme_cdf: s must be >= 1");
  if (!(p > 0.0) || !(p < 1.0)) {
    throw std::invalid_argument("inverse_extreme_cdf: p must lie in (0, 1)");
  }
  // P^{1/s} approaches 1 for large s; go through the upper tail.
  const double tail = -std::expm1(std::log(p) / static_cast<double>(s));
  return norm_quantile_upper(tail);
}

namespace {

double confidence_factor(const GlobalErrorParams& params) {
  if (!(params.gamma_r >= 1.0) || !(params.q_max > 0.0) || params.s < 1) {
    throw std::invalid_argument("a0_from_epsilon: invalid parameters");
  }
  const double pq = p_q(params.q);
  const double x = inverse_extreme_cdf(pq, params.s);  // = sqrt(2) erf^-1(2 P^{1/s} - 1)
  return 1.0 + (2.0 / params.q) * x;
}

}  // namespace

double a0_from_epsilon(double eps, const GlobalErrorParams& params) {
  if (!(eps > 0.0)) throw std::invalid_argument("a0_from_epsilon: eps must be positive");
  return 2.0 * eps / (params.gamma_r * params.q_max * confidence_factor(params));
}

double epsilon_from_a0(double a0, const GlobalErrorParams& params) {
  if (!(a0 > 0.0)) throw std::invalid_argument("epsilon_from_a0: a0 must be positive");
  return 0.5 * a0 * params.gamma_r * params.q_max * confidence_factor(params);
}

GumbelParams gumbel_params(long s) {
  if (s < 2) throw std::invalid_argument("gumbel_params: s must be >= 2");
  const double location = -norm_quantile(1.0 / static_cast<double>(s));
  if (!(location > 0.0)) {
    throw std::invalid_argument("gumbel_params: degenerate scale at this s");
  }
  return GumbelParams{location, 1.0 / location};
}

double sample_max_normal(long s, Rng& rng) {
  const double u = rng.next_uniform();
  double tail = -std::expm1(std::log(u) / static_cast<double>(s));
  if (!(tail > 0.0)) tail = 5e-324;
  if (!(tail < 1.0)) tail = 1.0 - 1e-16;
  return norm_quantile_upper(tail);
}

double nsr_simulate(const NsrParams& params, Rng& rng) {
  if (params.sample_count < 2) throw std::invalid_argument("nsr_simulate: too few samples");
  if (params.ratio_kprime_over_kpp < 0.0 || !(params.gamma_r >= 1.0) || params.s < 1) {
    throw std::invalid_argument("nsr_simulate: invalid parameters");
  }
  const double r = params.ratio_kprime_over_kpp;
  const double g = params.gamma_r;
  double mean = 0.0;
  double m2 = 0.0;
  for (long i = 0; i < params.sample_count; ++i) {
    const double smax = sample_max_normal(params.s, rng);
    const double t = (r + 2.0 * g * smax) * (r + 2.0 * g * smax);
    const double delta = t - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (t - mean);
  }
  const double var = m2 / static_cast<double>(params.sample_count - 1);
  const double denom = params.q * params.q * (r + g) * (r + g) + mean;
  return std::sqrt(var) / denom;
}

}  // namespace pdd
