#pragma once

#include "pdd/types.hpp"

namespace pdd {

struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
  double se_intercept = 0.0;
  double se_slope = 0.0;
  bool converged = true;  // gamma IRLS only; OLS fallback sets false
};

/// Ordinary least squares of y on (1, x). When noise_variance > 0 it is used
/// as the known common per-point variance for the standard errors; otherwise
/// they come from the residuals.
LineFit fit_normal_identity(const VecX& x, const VecX& y, double noise_variance = -1.0);

/// Gamma GLM with identity link by IRLS (weights 1/mu^2, cap 100 iterations,
/// relative tolerance 1e-10). Falls back to OLS with converged=false when the
/// iteration stalls; throws if a fitted mean leaves the positive domain.
/// `shape` is the known gamma shape parameter, used for the standard errors.
LineFit fit_gamma_identity(const VecX& x, const VecX& y, double shape);

}  // namespace pdd
