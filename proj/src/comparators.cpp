#include "csd/comparators.hpp"

#include <cmath>

#include "csd/distributions.hpp"
#include "csd/errors.hpp"

namespace csd {

TestOutcome lm_bp_test(const CorrMatrix& corr, int t, double alpha) {
    const int n = corr.n();
    if (n < 2) throw DomainError("lm_bp_test: need N >= 2");
    double sum_sq = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) sum_sq += corr.rho(i, j) * corr.rho(i, j);

    TestOutcome out;
    out.method = Method::LM_BP;
    out.alpha = alpha;
    out.statistic = static_cast<double>(t) * sum_sq;
    const int df = n * (n - 1) / 2;
    out.p_value = 1.0 - chi2_cdf(out.statistic, df);
    out.reject = out.p_value < alpha;
    out.aux["df"] = static_cast<double>(df);
    return out;
}

TestOutcome cd_p_test(const CorrMatrix& corr, int t, double alpha) {
    const int n = corr.n();
    if (n < 2) throw DomainError("cd_p_test: need N >= 2");
    double sum = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) sum += corr.rho(i, j);

    TestOutcome out;
    out.method = Method::CD_P;
    out.alpha = alpha;
    out.statistic = std::sqrt(2.0 * t / (static_cast<double>(n) * (n - 1))) * sum;
    out.p_value = 2.0 * (1.0 - std_normal_cdf(std::abs(out.statistic)));
    out.reject = out.p_value < alpha;
    return out;
}

TestOutcome lm_puy_test(const ResidualSet& resids, const CorrMatrix& corr, double alpha) {
    const int n = resids.n_units();
    const int t = resids.n_periods();
    const int p = resids.n_regressors();
    const int tp = t - p;
    if (tp <= 4) throw SmallSample("lm_puy_test: need T - p > 4");

    const double a2t_core = (static_cast<double>(tp - 8) * (tp + 2) + 24.0) /
                            (static_cast<double>(tp + 2) * (tp - 2) * (tp - 4));
    const double a2t = 3.0 * a2t_core * a2t_core;
    const double a1t = a2t - 1.0 / (static_cast<double>(tp) * tp);

    // Per-row partials summed in index order keep the result independent
    // of the thread schedule.
    std::vector<double> row(n, 0.0);
#pragma omp parallel for schedule(dynamic, 4)
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int j = i + 1; j < n; ++j) {
            const TracePair tr = trace_pipj(resids.ortho_basis[i], resids.ortho_basis[j]);
            const double mu = tr.tr_pipj / static_cast<double>(tp);
            const double v2 = tr.tr_pipj * tr.tr_pipj * a1t + 2.0 * tr.tr_pipj_sq * a2t;
            acc += (static_cast<double>(tp) * corr.rho(i, j) * corr.rho(i, j) - mu) / std::sqrt(v2);
        }
        row[i] = acc;
    }
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += row[i];

    TestOutcome out;
    out.method = Method::LM_PUY;
    out.alpha = alpha;
    out.statistic = std::sqrt(2.0 / (static_cast<double>(n) * (n - 1))) * sum;
    out.p_value = 1.0 - std_normal_cdf(out.statistic);
    out.reject = out.p_value < alpha;
    return out;
}

TestOutcome lm_puy_test(const ResidualSet& resids, double alpha) {
    return lm_puy_test(resids, residual_correlations(resids), alpha);
}

TestOutcome lm_fjlx_test(const ResidualSet& resids, const CorrMatrix& corr, double alpha) {
    const int n = resids.n_units();
    const int t = resids.n_periods();
    const int p = resids.n_regressors();
    if (t <= p) throw SmallSample("lm_fjlx_test: need T > p");

    std::vector<double> row_sq(n, 0.0), row_tr(n, 0.0);
#pragma omp parallel for schedule(dynamic, 4)
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            row_sq[i] += corr.rho(i, j) * corr.rho(i, j);
            row_tr[i] += trace_pipj(resids.ortho_basis[i], resids.ortho_basis[j]).tr_pipj;
        }
    }
    double sum_sq = 0.0;
    double trace_sum = 0.0;
    for (int i = 0; i < n; ++i) {
        sum_sq += row_sq[i];
        trace_sum += row_tr[i];
    }
    const double mu_n = static_cast<double>(t) / (static_cast<double>(t - p) * (t - p)) * trace_sum;

    TestOutcome out;
    out.method = Method::LM_FJLX;
    out.alpha = alpha;
    out.statistic = (static_cast<double>(t) * sum_sq - mu_n) / static_cast<double>(n);
    out.p_value = 1.0 - std_normal_cdf(out.statistic);
    out.reject = out.p_value < alpha;
    out.aux["mu_n"] = mu_n;
    return out;
}

TestOutcome lm_fjlx_test(const ResidualSet& resids, double alpha) {
    return lm_fjlx_test(resids, residual_correlations(resids), alpha);
}

}  // namespace csd
