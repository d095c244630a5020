#pragma once

#include "csd/rng.hpp"

namespace csd {

// Standard normal CDF and quantile.
double std_normal_cdf(double x);
double std_normal_quantile(double p);

// Chi-square CDF and quantile for integer df >= 1 (regularized lower
// incomplete gamma; handles df as large as N(N-1)/2 for N = 100).
double chi2_cdf(double x, int df);
double chi2_quantile(double p, int df);

// Closed-form chi-square(4) CDF: 1 - exp(-x/2) (1 + x/2).
double chi2_4_cdf(double x);

// Samplers used by the Monte Carlo DGPs.
double sample_normal(RngStream& rng);
double sample_t(RngStream& rng, int df = 6);
double sample_chi2(RngStream& rng, int df);

}  // namespace csd
