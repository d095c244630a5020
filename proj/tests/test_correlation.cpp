#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "csd/correlation.hpp"
#include "csd/errors.hpp"
#include "oracles.hpp"

using csd::Matrix;

TEST_CASE("duplicated residual rows correlate at one") {
    Matrix resid(3, 4);
    resid << 1, -2, 0.5, 3, 1, -2, 0.5, 3, 0.3, 0.1, -1, 2;
    const csd::CorrMatrix corr = csd::residual_correlations(csd::oracle::residuals_from_matrix(resid));
    CHECK(corr.rho(0, 1) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("orthogonal residual rows correlate at zero") {
    Matrix resid(3, 4);
    resid << 1, -1, 0, 0, 0, 0, 1, -1, 1, 1, 1, 1;
    const csd::CorrMatrix corr = csd::residual_correlations(csd::oracle::residuals_from_matrix(resid));
    CHECK(corr.rho(0, 1) == doctest::Approx(0.0));
}

TEST_CASE("hand-computed correlation 9/sqrt(84)") {
    Matrix resid(3, 3);
    resid << 1, 2, 3, 1, 1, 2, 5, -1, 0;
    const csd::CorrMatrix corr = csd::residual_correlations(csd::oracle::residuals_from_matrix(resid));
    CHECK(std::abs(corr.rho(0, 1) - 9.0 / std::sqrt(14.0 * 6.0)) <= 1e-12);
    CHECK(corr.rho(0, 1) == doctest::Approx(0.98198).epsilon(1e-4));
}

TEST_CASE("scale invariance and sign equivariance") {
    csd::RngStream rng(11, 0);
    const Matrix resid = csd::oracle::random_matrix(rng, 5, 9);
    const csd::CorrMatrix base = csd::residual_correlations(csd::oracle::residuals_from_matrix(resid));

    Matrix scaled = resid;
    scaled.row(2) *= 17.0;
    const csd::CorrMatrix s = csd::residual_correlations(csd::oracle::residuals_from_matrix(scaled));
    CHECK((s.rho - base.rho).cwiseAbs().maxCoeff() <= 1e-12);

    Matrix flipped = resid;
    flipped.row(1) *= -1.0;
    const csd::CorrMatrix f = csd::residual_correlations(csd::oracle::residuals_from_matrix(flipped));
    for (int j = 0; j < 5; ++j) {
        if (j == 1) continue;
        CHECK(f.rho(1, j) == doctest::Approx(-base.rho(1, j)).epsilon(1e-12));
    }
}

TEST_CASE("symmetry and unit diagonal hold exactly") {
    csd::RngStream rng(12, 0);
    const Matrix resid = csd::oracle::random_matrix(rng, 6, 7);
    const csd::CorrMatrix corr = csd::residual_correlations(csd::oracle::residuals_from_matrix(resid));
    for (int i = 0; i < 6; ++i) {
        CHECK(corr.rho(i, i) == 1.0);
        for (int j = 0; j < 6; ++j) CHECK(corr.rho(i, j) == corr.rho(j, i));
    }
}

TEST_CASE("zero residual rows are rejected") {
    Matrix resid = Matrix::Zero(3, 4);
    resid.row(0) << 1, 2, 3, 4;
    resid.row(2) << -1, 1, -1, 1;
    CHECK_THROWS_AS(csd::residual_correlations(csd::oracle::residuals_from_matrix(resid)),
                    csd::DegenerateResidual);
}

TEST_CASE("tiny overshoot is clamped, large overshoot throws") {
    Matrix resid(3, 2);
    resid << 1, 2, 1, 2, 2, -1;
    csd::ResidualSet rs = csd::oracle::residuals_from_matrix(resid);
    rs.resid_sq_norm(0) *= 1.0 - 1e-14; // rho(0,1) barely above 1
    const csd::CorrMatrix corr = csd::residual_correlations(rs);
    CHECK(corr.rho(0, 1) == 1.0);

    rs.resid_sq_norm(0) = resid.row(0).squaredNorm() * (1.0 - 1e-6);
    CHECK_THROWS_AS(csd::residual_correlations(rs), csd::NumericalError);
}

TEST_CASE("parallel kernel equals the serial reference bitwise") {
    csd::RngStream rng(13, 0);
    const Matrix resid = csd::oracle::random_matrix(rng, 20, 30);
    const csd::ResidualSet rs = csd::oracle::residuals_from_matrix(resid);
    const csd::CorrMatrix fast = csd::residual_correlations(rs);
    const csd::CorrMatrix slow = csd::ref::residual_correlations_serial(rs);
    CHECK((fast.rho - slow.rho).cwiseAbs().maxCoeff() <= 1e-14);
}
