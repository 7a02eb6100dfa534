#pragma once

#include <cstddef>

namespace gdrc {

// Regularized incomplete beta function I_x(a, b), continued-fraction
// evaluation (modified Lentz).
double incomplete_beta(double a, double b, double x);

// CDF and inverse CDF (by bisection) of the F(d1, d2) distribution.
double f_cdf(double x, double d1, double d2);
double f_quantile(double p, double d1, double d2);

// Mean-perturbation radius (nu^2) of the DRC-mu baseline:
//   n (N0 - 1) / (N0 (N0 - n)) * F^{-1}_{n, N0-n}(quantile).
// Requires N0 > n and quantile in (0, 1); throws ConfigError otherwise.
double drc_mean_radius(std::size_t n, std::size_t n0, double quantile);

}  // namespace gdrc
