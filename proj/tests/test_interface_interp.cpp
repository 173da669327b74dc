#include <doctest.h>

#include <cmath>
#include <random>

#include "pdd/interface_interp.hpp"
#include "pdd/problem.hpp"

using namespace pdd;

namespace {

std::vector<Vec2> interior_centers(int p, double x = 0.5, double ymin = 0.0, double ymax = 1.0) {
  std::vector<Vec2> c(p);
  for (int i = 1; i <= p; ++i) {
    c[i - 1] = Vec2{x, ymin + (ymax - ymin) * i / (p + 1)};
  }
  return c;
}

// Piecewise-linear rule on collinear centers; a linear interpolator with
// overshoot constant exactly 1.
struct PiecewiseLinear {
  std::vector<Vec2> centers;
  VecX values;
  double operator()(const Vec2& x) const {
    const int p = static_cast<int>(centers.size());
    const double t = x[1];
    if (t <= centers.front()[1]) return values[0];
    for (int i = 0; i + 1 < p; ++i) {
      const double a = centers[i][1];
      const double b = centers[i + 1][1];
      if (t <= b) {
        const double w = (t - a) / (b - a);
        return (1.0 - w) * values[i] + w * values[i + 1];
      }
    }
    return values[p - 1];
  }
};

}  // namespace

TEST_CASE("fit is exact at the centers and handles degenerate data") {
  const auto centers = interior_centers(6);
  SUBCASE("zero data gives the zero function") {
    const Interpolant itp = fit_interpolant(centers, VecX::Zero(6), 0.2);
    CHECK(itp.weights.cwiseAbs().maxCoeff() <= 1e-12);
    for (double y = 0.0; y <= 1.0; y += 0.05) {
      CHECK(std::abs(itp.eval(Vec2{0.5, y})) <= 1e-10);
    }
  }
  SUBCASE("constant data is matched at the centers") {
    const Interpolant itp = fit_interpolant(centers, VecX::Ones(6), 0.2);
    for (const auto& c : centers) CHECK(itp.eval(c) == doctest::Approx(1.0).epsilon(1e-8));
  }
  SUBCASE("random data is reproduced to interpolation exactness") {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    VecX vals(6);
    for (int i = 0; i < 6; ++i) vals[i] = u(gen);
    const Interpolant itp = fit_interpolant(centers, vals, 0.2);
    for (int i = 0; i < 6; ++i) {
      CHECK(itp.eval(centers[i]) == doctest::Approx(vals[i]).epsilon(1e-8));
    }
  }
}

TEST_CASE("fit input validation") {
  CHECK_THROWS_AS(fit_interpolant({Vec2{0, 0}}, VecX::Ones(1), 0.1), std::invalid_argument);
  CHECK_THROWS_AS(fit_interpolant(interior_centers(3), VecX::Ones(3), 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(fit_interpolant({Vec2{0, 0.5}, Vec2{0, 0.5}}, VecX::Ones(2), 0.1),
                  std::invalid_argument);
  // A nearly flat kernel drives the system past the conditioning guard.
  CHECK_THROWS_AS(fit_interpolant(interior_centers(10), VecX::Ones(10), 500.0),
                  std::runtime_error);
}

TEST_CASE("linearity at random evaluation points") {
  const auto centers = interior_centers(6);
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> coeff(-3.0, 3.0), yy(0.0, 1.0);
  VecX u(6), v(6);
  for (int i = 0; i < 6; ++i) {
    u[i] = coeff(gen);
    v[i] = coeff(gen);
  }
  const double lambda = coeff(gen);
  const double mu = coeff(gen);
  const Interpolant iu = fit_interpolant(centers, u, 0.2);
  const Interpolant iv = fit_interpolant(centers, v, 0.2);
  const Interpolant imix = fit_interpolant(centers, lambda * u + mu * v, 0.2);
  for (int k = 0; k < 100; ++k) {
    const Vec2 x{0.5, yy(gen)};
    CHECK(imix.eval(x) ==
          doctest::Approx(lambda * iu.eval(x) + mu * iv.eval(x)).epsilon(1e-8));
  }
}

TEST_CASE("six-center interpolant of the benchmark trace beats three centers") {
  const TestProblem tp = paper_test_problem(make_domain(0, 4, 0, 1));
  auto trace_fit = [&](int p) {
    const auto centers = interior_centers(p, 1.0);
    VecX vals(p);
    for (int i = 0; i < p; ++i) vals[i] = tp.exact_u(centers[i]);
    const Interpolant itp = fit_interpolant(centers, vals, default_shape(1.0, p));
    double err = 0.0;
    for (int g = 0; g <= 200; ++g) {
      const Vec2 x{1.0, g / 200.0};
      err = std::max(err, std::abs(itp.eval(x) - tp.exact_u(x)));
    }
    return err;
  };
  CHECK(trace_fit(6) < trace_fit(3));
}

TEST_CASE("overshoot of the piecewise-linear double is exactly 1") {
  const auto centers = interior_centers(6);
  auto rule = [&](const VecX& values) { return PiecewiseLinear{centers, values}; };
  const auto est = overshoot_of_linear_rule(rule, centers, overshoot_grid(centers, 50));
  CHECK(est.gamma == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("overshoot of six multiquadric centers sits near 1.5") {
  const auto centers = interior_centers(6);
  const auto est = overshoot_constant(centers, default_shape(1.0, 6));
  CHECK(est.gamma >= 1.2);
  CHECK(est.gamma <= 1.8);
  CHECK(est.argmax_pattern.size() == 6);
}

TEST_CASE("overshoot rejects p=1 and lower-bounds p=2") {
  CHECK_THROWS_AS(overshoot_constant({Vec2{0.5, 0.5}}, 0.1), std::invalid_argument);
  const auto est = overshoot_constant({Vec2{0.5, 0.4}, Vec2{0.5, 0.6}}, 0.2);
  CHECK(est.gamma >= 1.0);
  std::vector<Vec2> many(21);
  for (int i = 0; i < 21; ++i) many[i] = Vec2{0.5, (i + 1) / 22.0};
  CHECK_THROWS_AS(overshoot_constant(many, 0.05), std::invalid_argument);
}

TEST_CASE("overshoot equals brute-force enumeration for small p") {
  const auto centers = interior_centers(5);
  const double shape = 0.18;
  const auto grid = overshoot_grid(centers, 50);
  const auto fast = overshoot_constant(centers, shape);
  double brute = 0.0;
  for (int mask = 0; mask < (1 << 5); ++mask) {
    VecX z(5);
    for (int i = 0; i < 5; ++i) z[i] = (mask >> i) & 1 ? 1.0 : -1.0;
    const Interpolant itp = fit_interpolant(centers, z, shape);
    for (const auto& x : grid) brute = std::max(brute, std::abs(itp.eval(x)));
  }
  CHECK(fast.gamma == doctest::Approx(brute).epsilon(1e-10));
}

TEST_CASE("overshoot is invariant under a global sign flip") {
  const auto centers = interior_centers(4);
  const auto grid = overshoot_grid(centers, 50);
  const auto est = overshoot_constant(centers, 0.25);
  VecX z(4), zneg(4);
  for (int i = 0; i < 4; ++i) {
    z[i] = est.argmax_pattern[i];
    zneg[i] = -z[i];
  }
  const Interpolant a = fit_interpolant(centers, z, 0.25);
  const Interpolant b = fit_interpolant(centers, zneg, 0.25);
  double sup_a = 0.0, sup_b = 0.0;
  for (const auto& x : grid) {
    sup_a = std::max(sup_a, std::abs(a.eval(x)));
    sup_b = std::max(sup_b, std::abs(b.eval(x)));
  }
  CHECK(sup_a == doctest::Approx(sup_b).epsilon(1e-10));
  CHECK(sup_a == doctest::Approx(est.gamma).epsilon(1e-10));
}

TEST_CASE("overshoot grows toward the flat limit") {
  const auto centers = interior_centers(6);
  double prev = 0.0;
  for (double shape : {0.1, 0.2, 0.4, 0.8}) {
    const double gamma = overshoot_constant(centers, shape).gamma;
    CHECK(gamma >= prev - 1e-9);
    prev = gamma;
  }
}
