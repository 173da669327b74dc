#pragma once

#include <vector>

#include "pdd/types.hpp"

namespace pdd {

/// Multiquadric RBF interpolant on one interface, phi(r) = sqrt(r^2 + c^2).
/// Immutable after fit; evaluation is thread-safe.
struct Interpolant {
  std::vector<Vec2> centers;
  VecX weights;
  double shape = 0.0;

  double eval(const Vec2& x) const;
};

/// Dense symmetric solve of the interpolation system; exact at the centers.
/// Throws when the system's condition estimate exceeds 1e14.
Interpolant fit_interpolant(const std::vector<Vec2>& centers, const VecX& values, double shape);

/// Default multiquadric shape: interface length / (p - 1).
double default_shape(double interface_length, int center_count);

struct OvershootEstimate {
  double gamma = 1.0;
  std::vector<int> argmax_pattern;  // entries +-1
};

/// Worst-case sup of |R[z]| over all sign vectors z in {-1,+1}^p and a dense
/// evaluation grid along the segment spanned by the centers. The inner
/// maximum over z decouples per evaluation point (pick z_i matching the sign
/// of the i-th cardinal function), so the 2^p search reduces to an l1 norm of
/// cardinal rows; the p <= 20 contract of the enumeration is kept.
OvershootEstimate overshoot_constant(const std::vector<Vec2>& centers, double shape,
                                     int grid_points_per_center = 50);

/// Same bound for any linear interpolation rule. `fit_values` maps nodal
/// values to an evaluator; used with test doubles (e.g. piecewise linear).
template <class FitValues>
OvershootEstimate overshoot_of_linear_rule(const FitValues& fit_values,
                                           const std::vector<Vec2>& centers,
                                           const std::vector<Vec2>& grid);

/// Evaluation grid along the segment through the centers.
std::vector<Vec2> overshoot_grid(const std::vector<Vec2>& centers, int grid_points_per_center);

// --- implementation ---

template <class FitValues>
OvershootEstimate overshoot_of_linear_rule(const FitValues& fit_values,
                                           const std::vector<Vec2>& centers,
                                           const std::vector<Vec2>& grid) {
  const int p = static_cast<int>(centers.size());
  if (p < 2) throw std::invalid_argument("overshoot: need at least 2 centers");
  if (p > 20) throw std::invalid_argument("overshoot: more than 20 centers unsupported");
  // Cardinal functions: column i is the rule applied to the i-th unit vector.
  MatX cardinal(static_cast<int>(grid.size()), p);
  for (int i = 0; i < p; ++i) {
    VecX e = VecX::Zero(p);
    e[i] = 1.0;
    const auto rule = fit_values(e);
    for (int g = 0; g < cardinal.rows(); ++g) cardinal(g, i) = rule(grid[g]);
  }
  OvershootEstimate out;
  out.gamma = 0.0;
  int best_row = 0;
  for (int g = 0; g < cardinal.rows(); ++g) {
    const double v = cardinal.row(g).cwiseAbs().sum();
    if (v > out.gamma) {
      out.gamma = v;
      best_row = g;
    }
  }
  out.argmax_pattern.resize(p);
  for (int i = 0; i < p; ++i) {
    out.argmax_pattern[i] = cardinal(best_row, i) >= 0.0 ? 1 : -1;
  }
  return out;
}

}  // namespace pdd
