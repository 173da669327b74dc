#include "pdd/glm.hpp"

#include <cmath>
#include <stdexcept>

namespace pdd {

namespace {

void check_inputs(const VecX& x, const VecX& y) {
  if (x.size() != y.size()) throw std::invalid_argument("fit: size mismatch");
  if (x.size() < 3) throw std::invalid_argument("fit: need at least 3 points");
  const double spread = (x.array() - x.mean()).abs().maxCoeff();
  if (!(spread > 0.0)) throw std::invalid_argument("fit: design is rank deficient");
}

// Weighted least squares on (1, x); returns (intercept, slope) and the
// unscaled covariance (X^T W X)^{-1}.
void wls(const VecX& x, const VecX& y, const VecX& w, double* intercept, double* slope,
         Mat2* cov_unscaled) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, t0 = 0.0, t1 = 0.0;
  for (int i = 0; i < x.size(); ++i) {
    s0 += w[i];
    s1 += w[i] * x[i];
    s2 += w[i] * x[i] * x[i];
    t0 += w[i] * y[i];
    t1 += w[i] * x[i] * y[i];
  }
  const double det = s0 * s2 - s1 * s1;
  if (!(std::abs(det) > 0.0)) throw std::invalid_argument("fit: design is rank deficient");
  *intercept = (s2 * t0 - s1 * t1) / det;
  *slope = (s0 * t1 - s1 * t0) / det;
  if (cov_unscaled) {
    (*cov_unscaled)(0, 0) = s2 / det;
    (*cov_unscaled)(0, 1) = -s1 / det;
    (*cov_unscaled)(1, 0) = -s1 / det;
    (*cov_unscaled)(1, 1) = s0 / det;
  }
}

}  // namespace

LineFit fit_normal_identity(const VecX& x, const VecX& y, double noise_variance) {
  check_inputs(x, y);
  const VecX w = VecX::Ones(x.size());
  LineFit f;
  Mat2 cov;
  wls(x, y, w, &f.intercept, &f.slope, &cov);
  double s2 = noise_variance;
  if (!(s2 > 0.0)) {
    double rss = 0.0;
    for (int i = 0; i < x.size(); ++i) {
      const double r = y[i] - f.intercept - f.slope * x[i];
      rss += r * r;
    }
    s2 = rss / (x.size() - 2);
  }
  f.se_intercept = std::sqrt(s2 * cov(0, 0));
  f.se_slope = std::sqrt(s2 * cov(1, 1));
  return f;
}

LineFit fit_gamma_identity(const VecX& x, const VecX& y, double shape) {
  check_inputs(x, y);
  if ((y.array() <= 0.0).any()) {
    throw std::invalid_argument("fit_gamma_identity: responses must be positive");
  }
  LineFit f;
  double intercept = y.mean();
  double slope = 0.0;
  VecX mu = VecX::Constant(x.size(), intercept);
  Mat2 cov = Mat2::Identity();
  bool converged = false;
  for (int it = 0; it < 100; ++it) {
    const VecX w = mu.array().square().inverse();
    double bi, bs;
    wls(x, y, w, &bi, &bs, &cov);
    VecX mu_new = bi + bs * x.array();
    if ((mu_new.array() <= 0.0).any()) {
      throw std::runtime_error("fit_gamma_identity: fitted mean left the positive domain");
    }
    const double change = std::max(std::abs(bi - intercept), std::abs(bs - slope));
    const double scale = std::max({1.0, std::abs(bi), std::abs(bs)});
    intercept = bi;
    slope = bs;
    mu = mu_new;
    if (change <= 1e-10 * scale) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    f = fit_normal_identity(x, y);
    f.converged = false;
    return f;
  }
  f.intercept = intercept;
  f.slope = slope;
  const double dispersion = shape > 0.0 ? 1.0 / shape : 1.0;
  f.se_intercept = std::sqrt(dispersion * cov(0, 0));
  f.se_slope = std::sqrt(dispersion * cov(1, 1));
  f.converged = true;
  return f;
}

}  // namespace pdd
