#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "csd/errors.hpp"
#include "csd/panel.hpp"
#include "oracles.hpp"

using csd::Matrix;
using csd::Vector;

TEST_CASE("fit_unit_ols recovers an exact linear fit") {
    csd::RngStream rng(1, 0);
    const Matrix x = csd::oracle::random_matrix(rng, 6, 2);
    Vector beta(2);
    beta << 1.5, -0.25;
    const Vector y = x * beta;
    const csd::UnitFit fit = csd::fit_unit_ols(x, y);
    CHECK(std::abs(fit.beta(0) - 1.5) < 1e-10);
    CHECK(std::abs(fit.beta(1) + 0.25) < 1e-10);
    CHECK(fit.resid.norm() < 1e-10);
}

TEST_CASE("fit_unit_ols intercept-only demeans") {
    Matrix x = Matrix::Ones(3, 1);
    Vector y(3);
    y << 1, 2, 3;
    const csd::UnitFit fit = csd::fit_unit_ols(x, y);
    CHECK(fit.beta(0) == doctest::Approx(2.0));
    CHECK(fit.resid(0) == doctest::Approx(-1.0));
    CHECK(fit.resid(1) == doctest::Approx(0.0));
    CHECK(fit.resid(2) == doctest::Approx(1.0));
}

TEST_CASE("fit_unit_ols matches a normal-equations oracle") {
    csd::RngStream rng(2, 0);
    const Matrix x = csd::oracle::random_matrix(rng, 6, 2);
    const Vector y = csd::oracle::random_matrix(rng, 6, 1);
    const Matrix xtx = x.transpose() * x;
    const double det = xtx(0, 0) * xtx(1, 1) - xtx(0, 1) * xtx(1, 0);
    Matrix inv(2, 2);
    inv << xtx(1, 1), -xtx(0, 1), -xtx(1, 0), xtx(0, 0);
    inv /= det;
    const Vector beta_oracle = inv * (x.transpose() * y);
    const Vector resid_oracle = y - x * beta_oracle;
    const csd::UnitFit fit = csd::fit_unit_ols(x, y);
    CHECK((fit.beta - beta_oracle).norm() < 1e-10);
    CHECK((fit.resid - resid_oracle).norm() < 1e-10);
    CHECK((fit.q.transpose() * fit.q - Matrix::Identity(2, 2)).norm() < 1e-10);
}

TEST_CASE("fit_unit_ols rejects rank-deficient regressors") {
    Matrix x(5, 2);
    for (int s = 0; s < 5; ++s) {
        x(s, 0) = s + 1.0;
        x(s, 1) = 2.0 * (s + 1.0);
    }
    Vector y = Vector::Ones(5);
    CHECK_THROWS_AS(csd::fit_unit_ols(x, y), csd::RankDeficient);
    CHECK_THROWS_AS(csd::fit_unit_ols(x, Vector::Ones(4)), csd::DimensionMismatch);
}

namespace {

csd::PanelDataset random_dataset(std::uint64_t seed, int n, int t, int p) {
    csd::RngStream rng(seed, 0);
    csd::PanelDataset data;
    data.n_units = n;
    data.n_periods = t;
    data.n_regressors = p;
    data.y = csd::oracle::random_matrix(rng, n, t);
    data.x.resize(n);
    for (int i = 0; i < n; ++i) {
        data.x[i] = csd::oracle::random_matrix(rng, t, p);
        data.x[i].col(0).setOnes();
    }
    return data;
}

}  // namespace

TEST_CASE("build_residuals on exact linear data gives zero residuals") {
    csd::PanelDataset data = random_dataset(3, 3, 8, 2);
    for (int i = 0; i < 3; ++i) {
        Vector beta(2);
        beta << 1.0 + i, -0.5;
        data.y.row(i) = (data.x[i] * beta).transpose();
    }
    const csd::ResidualSet rs = csd::build_residuals(data);
    CHECK(rs.resid.norm() < 1e-9);
}

TEST_CASE("build_residuals is equivariant under unit permutation") {
    const csd::PanelDataset data = random_dataset(4, 5, 10, 2);
    csd::PanelDataset perm = data;
    const int order[5] = {3, 0, 4, 1, 2};
    for (int i = 0; i < 5; ++i) {
        perm.y.row(i) = data.y.row(order[i]);
        perm.x[i] = data.x[order[i]];
    }
    const csd::ResidualSet a = csd::build_residuals(data);
    const csd::ResidualSet b = csd::build_residuals(perm);
    for (int i = 0; i < 5; ++i) CHECK((b.resid.row(i) - a.resid.row(order[i])).norm() == 0.0);
}

TEST_CASE("residuals are orthogonal to the regressor span") {
    const csd::PanelDataset data = random_dataset(5, 6, 12, 3);
    const csd::ResidualSet rs = csd::build_residuals(data);
    for (int i = 0; i < 6; ++i) {
        CHECK((rs.ortho_basis[i].transpose() * rs.resid.row(i).transpose()).norm() < 1e-9);
        CHECK(std::abs(rs.resid_sq_norm(i) - rs.resid.row(i).squaredNorm()) <=
              1e-12 * std::max(1.0, rs.resid_sq_norm(i)));
    }
}

TEST_CASE("residuals are invariant to shifts inside the regressor span") {
    csd::PanelDataset data = random_dataset(6, 4, 9, 2);
    const csd::ResidualSet base = csd::build_residuals(data);
    Vector shift(2);
    shift << 3.0, -7.0;
    for (int i = 0; i < 4; ++i) data.y.row(i) += (data.x[i] * shift).transpose();
    const csd::ResidualSet shifted = csd::build_residuals(data);
    CHECK((shifted.resid - base.resid).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("trace_pipj for identical and orthogonal subspaces") {
    csd::RngStream rng(7, 0);
    const Matrix q = csd::oracle::random_orthonormal(rng, 10, 2);
    const csd::TracePair same = csd::trace_pipj(q, q);
    CHECK(std::abs(same.tr_pipj - 8.0) < 1e-9);
    CHECK(std::abs(same.tr_pipj_sq - 8.0) < 1e-9);

    Matrix qi = Matrix::Zero(8, 2), qj = Matrix::Zero(8, 2);
    qi(0, 0) = qi(1, 1) = 1.0;
    qj(2, 0) = qj(3, 1) = 1.0;
    const csd::TracePair perp = csd::trace_pipj(qi, qj);
    CHECK(std::abs(perp.tr_pipj - 4.0) < 1e-12);
    CHECK(std::abs(perp.tr_pipj_sq - 4.0) < 1e-12);
}

TEST_CASE("trace_pipj matches the dense-matrix oracle") {
    csd::RngStream rng(8, 0);
    for (int t = 4; t <= 12; ++t) {
        for (int p = 1; p <= 3 && p < t; ++p) {
            const Matrix qi = csd::oracle::random_orthonormal(rng, t, p);
            const Matrix qj = csd::oracle::random_orthonormal(rng, t, p);
            const auto [tr1, tr2] = csd::oracle::dense_trace_pipj(qi, qj);
            const csd::TracePair fast = csd::trace_pipj(qi, qj);
            CHECK(std::abs(fast.tr_pipj - tr1) < 1e-9);
            CHECK(std::abs(fast.tr_pipj_sq - tr2) < 1e-9);
            CHECK(fast.tr_pipj >= 0.0);
            CHECK(fast.tr_pipj <= t + 1e-9);
            CHECK(fast.tr_pipj_sq >= 0.0);
            CHECK(fast.tr_pipj_sq <= t + 1e-9);
        }
    }
}

TEST_CASE("PanelDataset::validate rejects bad shapes") {
    csd::PanelDataset data = random_dataset(9, 5, 10, 2);
    CHECK_NOTHROW(data.validate());
    data.n_units = 2;
    CHECK_THROWS_AS(data.validate(), csd::InputError);
    data = random_dataset(9, 5, 10, 2);
    data.n_periods = 2;
    CHECK_THROWS_AS(data.validate(), csd::InputError);
    data = random_dataset(9, 5, 10, 2);
    data.x.pop_back();
    CHECK_THROWS_AS(data.validate(), csd::DimensionMismatch);
}
