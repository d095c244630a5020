#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "csd/distributions.hpp"
#include "csd/errors.hpp"
#include "csd/sum_test.hpp"
#include "oracles.hpp"

using csd::Matrix;

namespace {

csd::CorrMatrix corr_from_offdiag(int n, const std::vector<double>& upper) {
    csd::CorrMatrix corr;
    corr.rho = Matrix::Identity(n, n);
    std::size_t k = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            corr.rho(i, j) = upper[k];
            corr.rho(j, i) = upper[k];
            ++k;
        }
    }
    return corr;
}

}  // namespace

TEST_CASE("compute_sn basics") {
    CHECK(csd::compute_sn(corr_from_offdiag(4, {0, 0, 0, 0, 0, 0})) == 0.0);
    // N = 2: the prefactor is 1, so S_N equals the single correlation.
    CHECK(csd::compute_sn(corr_from_offdiag(2, {0.37})) == doctest::Approx(0.37).epsilon(1e-12));
    CHECK(std::abs(csd::compute_sn(corr_from_offdiag(3, {0.1, 0.2, -0.3}))) <= 1e-15);
    CHECK(csd::compute_sn(corr_from_offdiag(3, {0.1, 0.2, 0.3})) ==
          doctest::Approx(std::sqrt(1.0 / 3.0) * 0.6).epsilon(1e-12));
    CHECK(csd::compute_sn(corr_from_offdiag(3, {0.1, 0.2, 0.3})) == doctest::Approx(0.34641).epsilon(1e-4));
}

TEST_CASE("sigma2 estimate rejects mutually orthogonal rows") {
    Matrix resid = Matrix::Identity(3, 3);
    CHECK_THROWS_AS(csd::estimate_sigma2_sn(csd::oracle::residuals_from_matrix(resid)),
                    csd::NonPositiveVariance);
}

TEST_CASE("sigma2 estimate is scale invariant") {
    csd::RngStream rng(21, 0);
    const Matrix resid = csd::oracle::random_matrix(rng, 6, 10);
    const double base = csd::estimate_sigma2_sn(csd::oracle::residuals_from_matrix(resid));
    const double scaled = csd::estimate_sigma2_sn(csd::oracle::residuals_from_matrix(5.0 * resid));
    CHECK(std::abs(scaled - base) <= 1e-12 * base);
}

TEST_CASE("Gram fast path equals the literal formula") {
    csd::RngStream rng(22, 0);
    SUBCASE("N=5, T=8") {
        const Matrix resid = csd::oracle::random_matrix(rng, 5, 8);
        const csd::ResidualSet rs = csd::oracle::residuals_from_matrix(resid);
        CHECK(std::abs(csd::estimate_sigma2_sn(rs) - csd::oracle::sigma2_sn_literal(rs)) <= 1e-12);
    }
    SUBCASE("all N up to 8") {
        for (int n = 3; n <= 8; ++n) {
            const Matrix resid = csd::oracle::random_matrix(rng, n, 12);
            const csd::ResidualSet rs = csd::oracle::residuals_from_matrix(resid);
            CHECK(std::abs(csd::estimate_sigma2_sn(rs) - csd::oracle::sigma2_sn_literal(rs)) <= 1e-12);
        }
    }
}

TEST_CASE("sum_test decision rule and p-value mapping") {
    csd::RngStream rng(23, 0);
    const Matrix resid = csd::oracle::random_matrix(rng, 8, 15);
    const csd::ResidualSet rs = csd::oracle::residuals_from_matrix(resid);
    const csd::TestOutcome out = csd::sum_test(rs, 0.05);
    CHECK(out.p_value == doctest::Approx(1.0 - csd::std_normal_cdf(out.statistic)).epsilon(1e-12));
    CHECK(out.reject == (out.statistic > csd::std_normal_quantile(0.95)));
    CHECK(out.aux.at("critical_value") == doctest::Approx(1.6449).epsilon(1e-4));
    // A statistic of zero maps to p = 0.5 and cannot reject at 5%.
    CHECK(1.0 - csd::std_normal_cdf(0.0) == 0.5);
    CHECK_FALSE(0.0 > csd::std_normal_quantile(0.95));
    const double sn = csd::compute_sn(csd::residual_correlations(rs));
    CHECK(out.statistic == doctest::Approx(sn / std::sqrt(out.aux.at("sigma2_hat"))).epsilon(1e-12));
}

TEST_CASE("empirical size on iid residual rows is near nominal") {
    // N = T = 50 raw normal rows, 2000 replications at the 5% level.
    int rejections = 0;
    const int reps = 2000;
    for (int r = 0; r < reps; ++r) {
        csd::RngStream rng(99, static_cast<std::uint64_t>(r));
        const Matrix resid = csd::oracle::random_matrix(rng, 50, 50);
        const csd::TestOutcome out = csd::sum_test(csd::oracle::residuals_from_matrix(resid), 0.05);
        if (out.reject) ++rejections;
    }
    const double rate = static_cast<double>(rejections) / reps;
    CHECK(rate > 0.035);
    CHECK(rate < 0.065);
}
