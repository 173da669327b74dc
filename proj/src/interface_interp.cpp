#include "pdd/interface_interp.hpp"

#include <cmath>
#include <stdexcept>

namespace pdd {

namespace {
inline double multiquadric(double r2, double shape) { return std::sqrt(r2 + shape * shape); }
}  // namespace

double Interpolant::eval(const Vec2& x) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < centers.size(); ++i) {
    acc += weights[static_cast<int>(i)] * multiquadric((x - centers[i]).squaredNorm(), shape);
  }
  return acc;
}

Interpolant fit_interpolant(const std::vector<Vec2>& centers, const VecX& values, double shape) {
  const int p = static_cast<int>(centers.size());
  if (p < 2) throw std::invalid_argument("fit_interpolant: need at least 2 centers");
  if (values.size() != p) throw std::invalid_argument("fit_interpolant: size mismatch");
  if (!(shape > 0.0)) throw std::invalid_argument("fit_interpolant: shape must be positive");
  for (int i = 0; i < p; ++i) {
    for (int j = i + 1; j < p; ++j) {
      if ((centers[i] - centers[j]).squaredNorm() == 0.0) {
        throw std::invalid_argument("fit_interpolant: duplicate centers");
      }
    }
  }
  MatX M(p, p);
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) {
      M(i, j) = multiquadric((centers[i] - centers[j]).squaredNorm(), shape);
    }
  }
  Eigen::JacobiSVD<MatX> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double smax = svd.singularValues()[0];
  const double smin = svd.singularValues()[p - 1];
  if (!(smin > 0.0) || smax / smin > 1e14) {
    throw std::runtime_error("fit_interpolant: interpolation system is ill-conditioned");
  }
  Interpolant out;
  out.centers = centers;
  out.shape = shape;
  out.weights = svd.solve(values);
  return out;
}

double default_shape(double interface_length, int center_count) {
  if (center_count < 2) throw std::invalid_argument("default_shape: need at least 2 centers");
  return interface_length / (center_count - 1);
}

std::vector<Vec2> overshoot_grid(const std::vector<Vec2>& centers, int grid_points_per_center) {
  const int p = static_cast<int>(centers.size());
  const int n = grid_points_per_center * p;
  const Vec2 a = centers.front();
  const Vec2 b = centers.back();
  std::vector<Vec2> grid(n);
  for (int g = 0; g < n; ++g) {
    const double t = static_cast<double>(g) / (n - 1);
    grid[g] = a + t * (b - a);
  }
  return grid;
}

OvershootEstimate overshoot_constant(const std::vector<Vec2>& centers, double shape,
                                     int grid_points_per_center) {
  auto fitter = [&](const VecX& values) {
    Interpolant itp = fit_interpolant(centers, values, shape);
    return [itp](const Vec2& x) { return itp.eval(x); };
  };
  return overshoot_of_linear_rule(fitter, centers, overshoot_grid(centers, grid_points_per_center));
}

}  // namespace pdd
