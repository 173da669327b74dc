#include "pdd/subdomain_solver.hpp"

#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "pdd/interface_interp.hpp"

namespace pdd {

namespace {

struct BilinearLocator {
  int i0, j0;
  double tx, ty;
};

BilinearLocator locate(const Domain& box, int nx, int ny, double hx, double hy, const Vec2& q) {
  const double x = std::clamp(q[0], box.xmin, box.xmax);
  const double y = std::clamp(q[1], box.ymin, box.ymax);
  int i0 = static_cast<int>((x - box.xmin) / hx);
  int j0 = static_cast<int>((y - box.ymin) / hy);
  i0 = std::clamp(i0, 0, nx - 1);
  j0 = std::clamp(j0, 0, ny - 1);
  const double tx = (x - (box.xmin + i0 * hx)) / hx;
  const double ty = (y - (box.ymin + j0 * hy)) / hy;
  return {i0, j0, std::clamp(tx, 0.0, 1.0), std::clamp(ty, 0.0, 1.0)};
}

double bilinear(const MatX& v, const BilinearLocator& l) {
  return (1.0 - l.tx) * (1.0 - l.ty) * v(l.i0, l.j0) + l.tx * (1.0 - l.ty) * v(l.i0 + 1, l.j0) +
         (1.0 - l.tx) * l.ty * v(l.i0, l.j0 + 1) + l.tx * l.ty * v(l.i0 + 1, l.j0 + 1);
}

}  // namespace

double GridField::value_at(const Vec2& x) const {
  return bilinear(values, locate(box, nx, ny, hx, hy, x));
}

Vec2 GradientTable::gradient_at(const Vec2& x) const {
  const auto l = locate(box, nx, ny, hx, hy, x);
  return Vec2{bilinear(dx, l), bilinear(dy, l)};
}

GridField solve_dirichlet(const Domain& subdomain, int subdomain_id,
                          const Coefficients& coefficients, const ScalarField& dirichlet,
                          double spacing) {
  if (!(spacing > 0.0)) throw std::invalid_argument("solve_dirichlet: spacing must be positive");
  GridField f;
  f.subdomain_id = subdomain_id;
  f.box = subdomain;
  f.nx = std::max(2, static_cast<int>(std::lround(subdomain.width() / spacing)));
  f.ny = std::max(2, static_cast<int>(std::lround(subdomain.height() / spacing)));
  f.hx = subdomain.width() / f.nx;
  f.hy = subdomain.height() / f.ny;
  f.values = MatX::Zero(f.nx + 1, f.ny + 1);

  // Boundary data.
  for (int i = 0; i <= f.nx; ++i) {
    f.values(i, 0) = dirichlet(f.grid_point(i, 0));
    f.values(i, f.ny) = dirichlet(f.grid_point(i, f.ny));
  }
  for (int j = 0; j <= f.ny; ++j) {
    f.values(0, j) = dirichlet(f.grid_point(0, j));
    f.values(f.nx, j) = dirichlet(f.grid_point(f.nx, j));
  }

  const int mx = f.nx - 1;
  const int my = f.ny - 1;
  const int n_unknowns = mx * my;
  auto idx = [mx](int i, int j) { return (j - 1) * mx + (i - 1); };

  Eigen::SparseMatrix<double> A(n_unknowns, n_unknowns);
  VecX rhs = VecX::Zero(n_unknowns);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(n_unknowns) * 5);

  for (int j = 1; j <= my; ++j) {
    for (int i = 1; i <= mx; ++i) {
      const Vec2 p = f.grid_point(i, j);
      const Mat2 Ad = coefficients.diffusion(p);
      if (std::abs(Ad(0, 1)) > 1e-12 * (1.0 + Ad.cwiseAbs().maxCoeff())) {
        throw std::invalid_argument("solve_dirichlet: mixed second derivatives unsupported");
      }
      const Vec2 b = coefficients.drift(p);
      const double c = coefficients.potential(p);
      const double ax = 0.5 * Ad(0, 0);
      const double ay = 0.5 * Ad(1, 1);

      const double cw = ax / (f.hx * f.hx) - b[0] / (2.0 * f.hx);
      const double ce = ax / (f.hx * f.hx) + b[0] / (2.0 * f.hx);
      const double cs = ay / (f.hy * f.hy) - b[1] / (2.0 * f.hy);
      const double cn = ay / (f.hy * f.hy) + b[1] / (2.0 * f.hy);
      const double cc = -2.0 * ax / (f.hx * f.hx) - 2.0 * ay / (f.hy * f.hy) + c;

      const int row = idx(i, j);
      trip.emplace_back(row, row, cc);
      double r = coefficients.source(p);
      if (i > 1) {
        trip.emplace_back(row, idx(i - 1, j), cw);
      } else {
        r -= cw * f.values(i - 1, j);
      }
      if (i < mx) {
        trip.emplace_back(row, idx(i + 1, j), ce);
      } else {
        r -= ce * f.values(i + 1, j);
      }
      if (j > 1) {
        trip.emplace_back(row, idx(i, j - 1), cs);
      } else {
        r -= cs * f.values(i, j - 1);
      }
      if (j < my) {
        trip.emplace_back(row, idx(i, j + 1), cn);
      } else {
        r -= cn * f.values(i, j + 1);
      }
      rhs[row] = r;
    }
  }
  A.setFromTriplets(trip.begin(), trip.end());
  A.makeCompressed();

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(A);
  if (lu.info() != Eigen::Success) {
    throw std::runtime_error("solve_dirichlet: factorization failed");
  }
  VecX u = lu.solve(rhs);
  if (lu.info() != Eigen::Success) {
    throw std::runtime_error("solve_dirichlet: solve failed");
  }
  const double scale = std::max(1.0, rhs.cwiseAbs().maxCoeff());
  const double residual = (A * u - rhs).cwiseAbs().maxCoeff() / scale;
  if (residual > 1e-10) {
    throw std::runtime_error("solve_dirichlet: discrete residual above tolerance");
  }

  for (int j = 1; j <= my; ++j) {
    for (int i = 1; i <= mx; ++i) {
      f.values(i, j) = u[idx(i, j)];
    }
  }
  return f;
}

GradientTable gradient_table(const GridField& field) {
  GradientTable t;
  t.subdomain_id = field.subdomain_id;
  t.box = field.box;
  t.nx = field.nx;
  t.ny = field.ny;
  t.hx = field.hx;
  t.hy = field.hy;
  t.dx = MatX::Zero(t.nx + 1, t.ny + 1);
  t.dy = MatX::Zero(t.nx + 1, t.ny + 1);
  const MatX& v = field.values;
  for (int j = 0; j <= t.ny; ++j) {
    for (int i = 0; i <= t.nx; ++i) {
      if (i == 0) {
        t.dx(i, j) = (-3.0 * v(0, j) + 4.0 * v(1, j) - v(2, j)) / (2.0 * t.hx);
      } else if (i == t.nx) {
        t.dx(i, j) = (3.0 * v(t.nx, j) - 4.0 * v(t.nx - 1, j) + v(t.nx - 2, j)) / (2.0 * t.hx);
      } else {
        t.dx(i, j) = (v(i + 1, j) - v(i - 1, j)) / (2.0 * t.hx);
      }
      if (j == 0) {
        t.dy(i, j) = (-3.0 * v(i, 0) + 4.0 * v(i, 1) - v(i, 2)) / (2.0 * t.hy);
      } else if (j == t.ny) {
        t.dy(i, j) = (3.0 * v(i, t.ny) - 4.0 * v(i, t.ny - 1) + v(i, t.ny - 2)) / (2.0 * t.hy);
      } else {
        t.dy(i, j) = (v(i, j + 1) - v(i, j - 1)) / (2.0 * t.hy);
      }
    }
  }
  return t;
}

double default_fd_spacing(double target_error) {
  if (!(target_error > 0.0)) {
    throw std::invalid_argument("default_fd_spacing: target must be positive");
  }
  // err ~= C h^2 with C ~= 30 on the trigonometric benchmark.
  const double h = std::sqrt(target_error / 30.0);
  return std::clamp(h, 1.0 / 512.0, 1.0 / 16.0);
}

std::vector<GridField> solve_error_propagation(const Partition& partition,
                                               const Coefficients& coefficients,
                                               const std::vector<double>& beta_signs,
                                               const std::vector<double>* omega, double q,
                                               double spacing, double rbf_shape) {
  const std::size_t n = partition.nodes.size();
  if (beta_signs.size() != n) {
    throw std::invalid_argument("solve_error_propagation: one sign per node required");
  }
  if (omega && omega->size() != n) {
    throw std::invalid_argument("solve_error_propagation: one draw per node required");
  }
  if (!(q > 0.0)) throw std::invalid_argument("solve_error_propagation: q must be positive");

  // One interpolant per interface carrying sign(beta) (+ noise part) data.
  // The interface endpoints sit on the true boundary, where the data is
  // exact, so they anchor the reconstruction at zero error.
  std::vector<Interpolant> itps;
  itps.reserve(partition.interfaces.size());
  for (const auto& itf : partition.interfaces) {
    const int p = static_cast<int>(itf.node_ids.size());
    std::vector<Vec2> centers(p + 2);
    VecX vals(p + 2);
    for (int i = 0; i < p; ++i) {
      const auto& node = partition.nodes[itf.node_ids[i]];
      centers[i] = node.position;
      double v = beta_signs[node.id] >= 0.0 ? 1.0 : -1.0;
      if (omega) v += (*omega)[node.id] / q;
      vals[i] = v;
    }
    centers[p] = Vec2{itf.x, itf.ymin};
    centers[p + 1] = Vec2{itf.x, itf.ymax};
    vals[p] = 0.0;
    vals[p + 1] = 0.0;
    const double shape = rbf_shape > 0.0 ? rbf_shape : default_shape(itf.length(), p);
    itps.push_back(fit_interpolant(centers, vals, shape));
  }

  Coefficients homogeneous = coefficients;
  homogeneous.source = [](const Vec2&) { return 0.0; };

  std::vector<GridField> out;
  out.reserve(partition.subdomains.size());
  for (int k = 0; k < partition.subdomain_count(); ++k) {
    const Domain& box = partition.subdomains[k];
    auto dirichlet = [&](const Vec2& x) -> double {
      for (std::size_t j = 0; j < partition.interfaces.size(); ++j) {
        const auto& itf = partition.interfaces[j];
        if (itf.left_subdomain != k && itf.right_subdomain != k) continue;
        if (x[0] != itf.x) continue;
        if (x[1] <= partition.domain.ymin || x[1] >= partition.domain.ymax) break;
        return itps[j].eval(x);
      }
      return 0.0;  // true boundary
    };
    out.push_back(solve_dirichlet(box, k, homogeneous, dirichlet, spacing));
  }
  return out;
}

CompositeGradientField::CompositeGradientField(Partition partition,
                                               std::vector<GradientTable> tables)
    : partition_(std::move(partition)), tables_(std::move(tables)) {
  if (tables_.size() != static_cast<std::size_t>(partition_.subdomain_count())) {
    throw std::invalid_argument("CompositeGradientField: one table per subdomain required");
  }
}

Vec2 CompositeGradientField::at(const Vec2& x) const {
  const Domain& d = partition_.domain;
  const Vec2 clamped{std::clamp(x[0], d.xmin, d.xmax), std::clamp(x[1], d.ymin, d.ymax)};
  const int k = locate_subdomain(partition_, clamped);
  return tables_[k].gradient_at(clamped);
}

void dump_grid_csv(const GridField& field, std::ostream& os) {
  os << "x,y,value\n";
  char buf[96];
  for (int j = 0; j <= field.ny; ++j) {
    for (int i = 0; i <= field.nx; ++i) {
      const Vec2 p = field.grid_point(i, j);
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", p[0], p[1], field.values(i, j));
      os << buf;
    }
  }
}

}  // namespace pdd
