#include "pdd/special.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace pdd {

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

namespace {

// Acklam's rational approximation of the normal quantile (~1e-9 relative),
// polished below with Halley steps against erfc.
double acklam(double p) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - plow) {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

constexpr double kInvSqrt2Pi = 0.3989422804014326779;

// One Halley iteration solving Phi(x) = p, written against the upper tail
// when q = 1 - p underflows the direct form.
double polish(double x, double p_lower, double q_upper) {
  for (int it = 0; it < 2; ++it) {
    const double pdf = kInvSqrt2Pi * std::exp(-0.5 * x * x);
    if (pdf <= 0.0) break;
    double err;
    if (p_lower <= 0.5 || q_upper < 0.5) {
      // err = Phi(x) - p, evaluated via the smaller of the two tails
      err = (p_lower <= 0.5) ? (0.5 * std::erfc(-x / std::sqrt(2.0)) - p_lower)
                             : (q_upper - 0.5 * std::erfc(x / std::sqrt(2.0)));
    } else {
      err = norm_cdf(x) - p_lower;
    }
    const double u = err / pdf;
    x -= u / (1.0 + 0.5 * x * u);
  }
  return x;
}

}  // namespace

double norm_quantile(double p) {
  if (!(p > 0.0) || !(p < 1.0)) {
    throw std::invalid_argument("norm_quantile: p must lie in (0, 1)");
  }
  return polish(acklam(p), p, 1.0 - p);
}

double norm_quantile_upper(double q) {
  if (!(q > 0.0) || !(q < 1.0)) {
    throw std::invalid_argument("norm_quantile_upper: q must lie in (0, 1)");
  }
  return polish(-acklam(q), 1.0 - q, q);
}

double erf_inv(double y) {
  if (!(y > -1.0) || !(y < 1.0)) {
    throw std::invalid_argument("erf_inv: argument must lie in (-1, 1)");
  }
  // erf^-1(y) = Phi^-1((1+y)/2) / sqrt(2); route through the tail form when
  // y is near +-1 so (1 -|y|)/2 keeps full precision.
  if (y >= 0.0) {
    return norm_quantile_upper(0.5 * (1.0 - y)) / std::sqrt(2.0);
  }
  return -norm_quantile_upper(0.5 * (1.0 + y)) / std::sqrt(2.0);
}

}  // namespace pdd
