#include "pdd/problem.hpp"

#include <cmath>
#include <stdexcept>

namespace pdd {

Mat2 diffusion_factor(const Mat2& A) {
  if (std::abs(A(0, 1) - A(1, 0)) > 1e-12 * (1.0 + A.cwiseAbs().maxCoeff())) {
    throw std::invalid_argument("diffusion_factor: matrix not symmetric");
  }
  Eigen::LLT<Mat2> llt(A);
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument("diffusion_factor: matrix not positive definite");
  }
  return llt.matrixL();
}

namespace {

// u = 2 cos(P) + sin(Q) + 3.1 with P = 2(y-2)x, Q = 3(x-2)y.
double exact_u_fn(const Vec2& p) {
  const double x = p[0], y = p[1];
  return 2.0 * std::cos(2.0 * (y - 2.0) * x) + std::sin(3.0 * (x - 2.0) * y) + 3.1;
}

Vec2 exact_grad_fn(const Vec2& p) {
  const double x = p[0], y = p[1];
  const double P = 2.0 * (y - 2.0) * x;
  const double Q = 3.0 * (x - 2.0) * y;
  const double ux = -4.0 * (y - 2.0) * std::sin(P) + 3.0 * y * std::cos(Q);
  const double uy = -4.0 * x * std::sin(P) + 3.0 * (x - 2.0) * std::cos(Q);
  return Vec2{ux, uy};
}

double exact_laplacian_fn(const Vec2& p) {
  const double x = p[0], y = p[1];
  const double P = 2.0 * (y - 2.0) * x;
  const double Q = 3.0 * (x - 2.0) * y;
  const double uxx = -8.0 * (y - 2.0) * (y - 2.0) * std::cos(P) - 9.0 * y * y * std::sin(Q);
  const double uyy = -8.0 * x * x * std::cos(P) - 9.0 * (x - 2.0) * (x - 2.0) * std::sin(Q);
  return uxx + uyy;
}

Vec2 paper_drift(const Vec2& p) {
  const double s = p[0] + p[1];
  const double v = std::cos(s) / (1.1 + std::sin(s));
  return Vec2{v, v};
}

double paper_potential(const Vec2& p) {
  const double s = p[0] + p[1];
  return -(p[0] * p[0] + p[1] * p[1]) / (1.1 + std::sin(s));
}

}  // namespace

TestProblem paper_test_problem(const Domain& bounds) {
  TestProblem tp;
  tp.name = "paper-sec6";
  tp.bounds = bounds;
  tp.rectangular = true;
  tp.boundary = std::make_shared<RectBoundary>(bounds);
  tp.has_exact = true;
  tp.exact_u = exact_u_fn;
  tp.exact_grad_u = exact_grad_fn;

  tp.coefficients.drift = paper_drift;
  tp.coefficients.diffusion = [](const Vec2&) { return Mat2(2.0 * Mat2::Identity()); };
  tp.coefficients.potential = paper_potential;
  // With A = 2I the second-order part of L reduces to the Laplacian, so
  // f = lap(u) + b . grad(u) + c u makes u the exact solution.
  tp.coefficients.source = [](const Vec2& p) {
    return exact_laplacian_fn(p) + paper_drift(p).dot(exact_grad_fn(p)) +
           paper_potential(p) * exact_u_fn(p);
  };
  tp.coefficients.boundary_value = exact_u_fn;
  return tp;
}

TestProblem laplace_disk_problem() {
  TestProblem tp;
  tp.name = "laplace-disk-benchmark";
  tp.bounds = Domain{-1.0, 1.0, -1.0, 1.0};
  tp.rectangular = false;
  tp.boundary = std::make_shared<DiskBoundary>(Vec2{0.0, 0.0}, 1.0);
  tp.has_exact = true;
  tp.exact_u = [](const Vec2&) { return 1.0; };
  tp.exact_grad_u = [](const Vec2&) { return Vec2::Zero().eval(); };

  tp.coefficients.drift = [](const Vec2&) { return Vec2::Zero().eval(); };
  tp.coefficients.diffusion = [](const Vec2&) { return Mat2(2.0 * Mat2::Identity()); };
  tp.coefficients.potential = [](const Vec2&) { return 0.0; };
  tp.coefficients.source = [](const Vec2&) { return 0.0; };
  tp.coefficients.boundary_value = [](const Vec2&) { return 1.0; };
  return tp;
}

TestProblem problem_by_name(const std::string& name, const Domain* bounds_override) {
  if (name == "paper-sec6") {
    return paper_test_problem(bounds_override ? *bounds_override : Domain{0.0, 4.0, 0.0, 1.0});
  }
  if (name == "laplace-disk-benchmark") {
    if (bounds_override) {
      throw std::invalid_argument("problem_by_name: disk benchmark has fixed geometry");
    }
    return laplace_disk_problem();
  }
  throw std::invalid_argument("problem_by_name: unknown problem '" + name + "'");
}

std::vector<std::string> registered_problems() {
  return {"paper-sec6", "laplace-disk-benchmark"};
}

SpectralBounds spectral_bounds(const Coefficients& coefficients, const Domain& domain,
                               int sample_count) {
  if (sample_count < 1) throw std::invalid_argument("spectral_bounds: sample_count must be >= 1");
  const int n = std::max(1, static_cast<int>(std::lround(std::sqrt(double(sample_count)))));
  SpectralBounds sb{std::numeric_limits<double>::infinity(),
                    -std::numeric_limits<double>::infinity()};
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Vec2 x{domain.xmin + domain.width() * (i + 0.5) / n,
                   domain.ymin + domain.height() * (j + 0.5) / n};
      const Mat2 A = coefficients.diffusion(x);
      if (std::abs(A(0, 1) - A(1, 0)) > 1e-10 * (1.0 + A.cwiseAbs().maxCoeff())) {
        throw std::invalid_argument("spectral_bounds: non-symmetric diffusion sample");
      }
      Eigen::SelfAdjointEigenSolver<Mat2> es(A);
      const double lo = es.eigenvalues()[0];
      const double hi = es.eigenvalues()[1];
      if (!(lo > 0.0)) {
        throw std::invalid_argument("spectral_bounds: non-SPD diffusion sample");
      }
      sb.lambda_min = std::min(sb.lambda_min, lo);
      sb.lambda_max = std::max(sb.lambda_max, hi);
    }
  }
  return sb;
}

}  // namespace pdd
