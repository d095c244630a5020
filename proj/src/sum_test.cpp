#include "csd/sum_test.hpp"

#include <cmath>
#include <string>

#include "csd/distributions.hpp"
#include "csd/errors.hpp"

namespace csd {

double compute_sn(const CorrMatrix& corr) {
    const int n = corr.n();
    if (n < 2) throw DomainError("compute_sn: need N >= 2");
    double sum = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) sum += corr.rho(i, j);
    return std::sqrt(2.0 / (static_cast<double>(n) * (n - 1))) * sum;
}

double estimate_sigma2_sn(const ResidualSet& resids, double var_floor) {
    const int n = resids.n_units();
    if (n < 3) throw DomainError("estimate_sigma2_sn: need N >= 3");
    for (int i = 0; i < n; ++i) {
        if (resids.resid_sq_norm(i) <= 0.0)
            throw DegenerateResidual("estimate_sigma2_sn: unit " + std::to_string(i) + " has zero residual norm");
    }

    // Gram matrix of the unit-normalized residual rows and its row sums.
    Matrix v = resids.resid;
    for (int i = 0; i < n; ++i) v.row(i) /= std::sqrt(resids.resid_sq_norm(i));
    const Matrix gram = v * v.transpose();
    const Vector row_sum = gram.rowwise().sum();

    // v_j'(v_i - vbar_ij) = G_ij - (r_j - G_ij - G_jj) / (N - 2), and
    // symmetrically for the second factor.
    const double inv = 1.0 / static_cast<double>(n - 2);
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double g = gram(i, j);
            const double a = g - (row_sum(j) - g - gram(j, j)) * inv;
            const double b = g - (row_sum(i) - g - gram(i, i)) * inv;
            total += a * b;
        }
    }
    const double sigma2 = 2.0 / (static_cast<double>(n) * (n - 1)) * total;
    if (sigma2 <= var_floor)
        throw NonPositiveVariance("estimate_sigma2_sn: variance estimate " + std::to_string(sigma2) +
                                  " at or below floor");
    return sigma2;
}

TestOutcome sum_test(const ResidualSet& resids, const CorrMatrix& corr, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("sum_test: alpha must be in (0,1)");
    const double sn = compute_sn(corr);
    const double sigma2 = estimate_sigma2_sn(resids);

    TestOutcome out;
    out.method = Method::SN;
    out.alpha = alpha;
    out.statistic = sn / std::sqrt(sigma2);
    out.p_value = 1.0 - std_normal_cdf(out.statistic);
    out.reject = out.statistic > std_normal_quantile(1.0 - alpha);
    out.aux["s_n"] = sn;
    out.aux["sigma2_hat"] = sigma2;
    out.aux["critical_value"] = std_normal_quantile(1.0 - alpha);
    return out;
}

TestOutcome sum_test(const ResidualSet& resids, double alpha) {
    return sum_test(resids, residual_correlations(resids), alpha);
}

}  // namespace csd
