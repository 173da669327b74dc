#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <vector>

#include "pdd/geometry.hpp"
#include "pdd/problem.hpp"
#include "pdd/types.hpp"

namespace pdd {

/// Uniform-grid solution values on one subdomain, boundary included.
/// Boundary entries hold the supplied Dirichlet data exactly.
struct GridField {
  int subdomain_id = 0;
  Domain box;
  int nx = 0;  // intervals in x; nx+1 grid columns
  int ny = 0;
  double hx = 0.0;
  double hy = 0.0;
  MatX values;  // (nx+1) x (ny+1), indexed (ix, iy)

  /// Endpoints are pinned to the box bounds so boundary points match the
  /// interface coordinates exactly.
  Vec2 grid_point(int ix, int iy) const {
    return Vec2{ix == nx ? box.xmax : box.xmin + ix * hx,
                iy == ny ? box.ymax : box.ymin + iy * hy};
  }
  /// Bilinear interpolation; the query is clamped to the box.
  double value_at(const Vec2& x) const;
};

/// Discrete gradient of a GridField: central differences inside, one-sided
/// second-order at the subdomain boundary, bilinear sampling anywhere.
struct GradientTable {
  int subdomain_id = 0;
  Domain box;
  int nx = 0;
  int ny = 0;
  double hx = 0.0;
  double hy = 0.0;
  MatX dx;
  MatX dy;

  Vec2 gradient_at(const Vec2& x) const;
};

/// Second-order central FD solve of L u + c u = f with Dirichlet data on the
/// subdomain boundary. Requires diagonal A on the grid. Spacing is the target
/// grid step in both directions; the realized steps divide the box exactly.
GridField solve_dirichlet(const Domain& subdomain, int subdomain_id,
                          const Coefficients& coefficients, const ScalarField& dirichlet,
                          double spacing);

GradientTable gradient_table(const GridField& field);

/// Spacing for which the solver error stays near or below `target_error` on
/// smooth data (calibrated against the trigonometric benchmark).
double default_fd_spacing(double target_error);

/// Per-subdomain solves of L w + c w = 0 with w = 0 on the true boundary and
/// interpolated data R[sign(beta_i)] (+ (1/q) R[omega_i] when draws are given)
/// on the interfaces.
std::vector<GridField> solve_error_propagation(const Partition& partition,
                                               const Coefficients& coefficients,
                                               const std::vector<double>& beta_signs,
                                               const std::vector<double>* omega, double q,
                                               double spacing, double rbf_shape = 0.0);

/// Vector field sampled along trajectories (gradient lookups).
class VecField {
 public:
  virtual ~VecField() = default;
  virtual Vec2 at(const Vec2& x) const = 0;
};

class AnalyticVecField final : public VecField {
 public:
  explicit AnalyticVecField(VectorField f) : f_(std::move(f)) {}
  Vec2 at(const Vec2& x) const override { return f_(x); }

 private:
  VectorField f_;
};

/// Direct sum of per-subdomain gradient tables; lookups resolve the owning
/// subdomain through the partition's tie rule.
class CompositeGradientField final : public VecField {
 public:
  CompositeGradientField(Partition partition, std::vector<GradientTable> tables);
  Vec2 at(const Vec2& x) const override;

 private:
  Partition partition_;
  std::vector<GradientTable> tables_;
};

void dump_grid_csv(const GridField& field, std::ostream& os);

}  // namespace pdd
