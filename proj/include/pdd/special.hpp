#pragma once

namespace pdd {

/// Standard normal CDF.
double norm_cdf(double x);

/// Standard normal quantile, accurate into both tails (|rel err| < 1e-12).
double norm_quantile(double p);

/// Quantile from the upper-tail probability q = 1 - p; stable for tiny q.
double norm_quantile_upper(double q);

/// Inverse error function on (-1, 1).
double erf_inv(double y);

}  // namespace pdd
