#include "pdd/sde_engine.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "pdd/util.hpp"

namespace pdd {

TrajectoryOutcome simulate_trajectory(const Vec2& start, const TrajectoryParams& params,
                                      const Coefficients& coefficients,
                                      const BoundaryMap& boundary, const VecField* cv_gradient,
                                      const VecField* psi_gradient, Rng& rng) {
  const double h = params.timestep;
  if (!(h > 0.0)) throw std::invalid_argument("simulate_trajectory: timestep must be positive");
  const double sqrt_h = std::sqrt(h);

  TrajectoryOutcome out;
  Vec2 x = start;
  double y = 1.0;
  double z = 0.0;
  double xi = 0.0;
  double psi = 0.0;
  long k = 0;

  for (;;) {
    const BoundaryQuery q = boundary.query(x);
    if (k == 0 && q.distance >= 0.0) {
      throw std::invalid_argument("simulate_trajectory: start point must be interior");
    }
    const Mat2 sigma = diffusion_factor(coefficients.diffusion(x));
    const double layer = params.shrink_coefficient * (sigma.transpose() * q.normal).norm() * sqrt_h;
    if (q.distance > -layer) {
      out.score = coefficients.boundary_value(q.projection) * y + z;
      break;
    }
    if (k >= params.max_steps) {
      out.flagged = true;
      break;
    }
    const Vec2 dw = sqrt_h * rng.next_normal_pair();
    if (cv_gradient) xi -= y * (sigma.transpose() * cv_gradient->at(x)).dot(dw);
    if (psi_gradient) psi -= y * (sigma.transpose() * psi_gradient->at(x)).dot(dw);
    z -= h * y * coefficients.source(x);
    y *= 1.0 + h * coefficients.potential(x);
    x += h * coefficients.drift(x) + sigma * dw;
    ++k;
  }

  out.control_variate = xi;
  out.psi_bar = psi;
  out.steps = k;
  out.exit_time = k * h;
  return out;
}

void BatchStats::add(const Eigen::Vector4d& x) {
  n += 1;
  const Eigen::Vector4d delta = x - mean;
  mean += delta / static_cast<double>(n);
  m2 += delta * (x - mean).transpose();
}

void BatchStats::merge(const BatchStats& other) {
  flagged += other.flagged;
  total_steps += other.total_steps;
  if (other.n == 0) return;
  if (n == 0) {
    n = other.n;
    mean = other.mean;
    m2 = other.m2;
    return;
  }
  const double na = static_cast<double>(n);
  const double nb = static_cast<double>(other.n);
  const Eigen::Vector4d delta = other.mean - mean;
  m2 += other.m2 + (delta * delta.transpose()) * (na * nb / (na + nb));
  mean += delta * (nb / (na + nb));
  n += other.n;
}

double BatchStats::correlation(Component a, Component b) const {
  const double va = variance_of(a);
  const double vb = variance_of(b);
  if (!(va > 0.0) || !(vb > 0.0)) return 0.0;
  return covariance(a, b) / std::sqrt(va * vb);
}

BatchStats run_batch(const Vec2& start, const TrajectoryParams& params,
                     const Coefficients& coefficients, const BoundaryMap& boundary,
                     const VecField* cv_gradient, const VecField* psi_gradient, long n,
                     const BatchKey& key, int threads) {
  if (n < 2) throw std::invalid_argument("run_batch: need at least 2 realizations");
  constexpr long kChunk = 512;
  const long n_chunks = (n + kChunk - 1) / kChunk;
  std::vector<BatchStats> partial(static_cast<std::size_t>(n_chunks));

  parallel_for(n_chunks, threads, [&](long c) {
    BatchStats acc;
    const long begin = c * kChunk;
    const long end = std::min(n, begin + kChunk);
    for (long traj = begin; traj < end; ++traj) {
      Rng rng(key.seed, key.phase, key.node, key.batch, static_cast<std::uint64_t>(traj));
      const TrajectoryOutcome o = simulate_trajectory(start, params, coefficients, boundary,
                                                      cv_gradient, psi_gradient, rng);
      acc.total_steps += o.steps;
      if (o.flagged) {
        acc.flagged += 1;
        continue;
      }
      acc.add(Eigen::Vector4d{o.score, o.control_variate, o.psi_bar, o.exit_time});
    }
    partial[static_cast<std::size_t>(c)] = acc;
  });

  BatchStats total;
  for (const auto& p : partial) total.merge(p);
  if (total.n < 2) {
    throw std::runtime_error("run_batch: all realizations flagged before exit");
  }
  return total;
}

}  // namespace pdd
