#pragma once

#include <memory>
#include <string>
#include <vector>

#include "pdd/geometry.hpp"
#include "pdd/types.hpp"

namespace pdd {

/// Coefficient fields of the elliptic operator
///   L u + c u = f,   L = (1/2) sum_ij a_ij d2/dxi dxj + b . grad,
/// with Dirichlet data g on the boundary. Fields must be pure and callable
/// concurrently from any thread.
struct Coefficients {
  VectorField drift;          // b
  MatrixField diffusion;      // A, SPD
  ScalarField potential;      // c <= 0
  ScalarField source;         // f
  ScalarField boundary_value; // g
};

struct SpectralBounds {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
};

struct TestProblem {
  std::string name;
  Coefficients coefficients;
  Domain bounds;                                // bounding rectangle
  bool rectangular = true;                      // partitionable by the pipeline
  std::shared_ptr<const BoundaryMap> boundary;  // distance map for the integrator
  bool has_exact = false;
  ScalarField exact_u;
  VectorField exact_grad_u;
};

/// Lower-triangular sigma with sigma sigma^T = A. Throws on non-SPD input.
Mat2 diffusion_factor(const Mat2& A);

/// The trigonometric manufactured-solution benchmark:
/// u = 2 cos(2(y-2)x) + sin(3(x-2)y) + 3.1 with A = 2I and trigonometric
/// drift/potential; f is assembled from hand-coded derivatives of u.
TestProblem paper_test_problem(const Domain& bounds);

/// Laplace on the unit disk with g == 1 (b = c = f = 0, A = 2I).
TestProblem laplace_disk_problem();

/// Registry lookup: "paper-sec6" | "laplace-disk-benchmark".
TestProblem problem_by_name(const std::string& name, const Domain* bounds_override = nullptr);
std::vector<std::string> registered_problems();

/// Extremal eigenvalues of A(x) over a sample grid. Throws if any sampled
/// matrix fails to be SPD.
SpectralBounds spectral_bounds(const Coefficients& coefficients, const Domain& domain,
                               int sample_count);

}  // namespace pdd
