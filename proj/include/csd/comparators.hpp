#pragma once

#include "csd/correlation.hpp"
#include "csd/outcome.hpp"
#include "csd/panel.hpp"

namespace csd {

// Classical baselines. Sidedness: LM_BP, LM_PUY and LM_FJLX are
// upper-tailed, CD_P is two-sided.

// LM_BP = T sum_{i<j} rho_ij^2, chi-square with N(N-1)/2 df.
TestOutcome lm_bp_test(const CorrMatrix& corr, int t, double alpha);

// CD_P = sqrt(2T / (N(N-1))) sum_{i<j} rho_ij, standard normal.
TestOutcome cd_p_test(const CorrMatrix& corr, int t, double alpha);

// Bias-adjusted LM with projection-trace moments; requires T - p > 4.
TestOutcome lm_puy_test(const ResidualSet& resids, double alpha);
TestOutcome lm_puy_test(const ResidualSet& resids, const CorrMatrix& corr, double alpha);

// LM_FJLX = [sum_{i<j} T rho_ij^2 - mu_N] / N with
// mu_N = T/(T-p)^2 sum_{i<j} tr(P_i P_j).
TestOutcome lm_fjlx_test(const ResidualSet& resids, double alpha);
TestOutcome lm_fjlx_test(const ResidualSet& resids, const CorrMatrix& corr, double alpha);

}  // namespace csd
