#include "csd/panel.hpp"

#include <string>

#include "csd/errors.hpp"

namespace csd {

void PanelDataset::validate() const {
    if (n_units < 3) throw InputError("PanelDataset: need N >= 3 units");
    if (n_regressors < 1) throw InputError("PanelDataset: need p >= 1 regressors");
    if (n_periods <= n_regressors) throw InputError("PanelDataset: need T > p");
    if (y.rows() != n_units || y.cols() != n_periods) throw DimensionMismatch("PanelDataset: y shape mismatch");
    if (static_cast<int>(x.size()) != n_units) throw DimensionMismatch("PanelDataset: x count mismatch");
    for (const Matrix& xi : x) {
        if (xi.rows() != n_periods || xi.cols() != n_regressors)
            throw DimensionMismatch("PanelDataset: regressor block shape mismatch");
    }
}

UnitFit fit_unit_ols(const Matrix& x, const Vector& y, double rank_tol) {
    const auto t = x.rows();
    const auto p = x.cols();
    if (y.size() != t) throw DimensionMismatch("fit_unit_ols: y length != rows of x");
    if (t <= p) throw DimensionMismatch("fit_unit_ols: need more observations than regressors");

    Eigen::ColPivHouseholderQR<Matrix> qr(x);
    const Matrix r = qr.matrixR().topLeftCorner(p, p).template triangularView<Eigen::Upper>();
    double dmax = 0.0, dmin = std::numeric_limits<double>::infinity();
    for (int k = 0; k < p; ++k) {
        const double d = std::abs(r(k, k));
        dmax = std::max(dmax, d);
        dmin = std::min(dmin, d);
    }
    if (dmax == 0.0 || dmin < rank_tol * dmax) throw RankDeficient("fit_unit_ols: regressor matrix rank deficient");

    UnitFit fit;
    fit.beta = qr.solve(y);
    fit.resid = y - x * fit.beta;
    fit.q = qr.householderQ() * Matrix::Identity(t, p);
    return fit;
}

ResidualSet build_residuals(const PanelDataset& data) {
    data.validate();
    const int n = data.n_units;
    const int t = data.n_periods;

    ResidualSet rs;
    rs.resid.resize(n, t);
    rs.beta_hat.resize(n);
    rs.resid_sq_norm.resize(n);
    rs.ortho_basis.resize(n);

#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
        try {
            UnitFit fit = fit_unit_ols(data.x[i], data.y.row(i).transpose());
            rs.resid.row(i) = fit.resid.transpose();
            rs.beta_hat[i] = std::move(fit.beta);
            rs.resid_sq_norm(i) = rs.resid.row(i).squaredNorm();
            rs.ortho_basis[i] = std::move(fit.q);
        } catch (const Error&) {
            rs.resid_sq_norm(i) = -1.0; // marker, rethrown below with the unit index
        }
    }
    for (int i = 0; i < n; ++i) {
        if (rs.resid_sq_norm(i) < 0.0) {
            // redo serially to recover the message
            try {
                fit_unit_ols(data.x[i], data.y.row(i).transpose());
            } catch (const Error& e) {
                throw RankDeficient("unit " + std::to_string(i) + ": " + e.what());
            }
        }
    }
    return rs;
}

TracePair trace_pipj(const Matrix& qi, const Matrix& qj) {
    if (qi.rows() != qj.rows() || qi.cols() != qj.cols()) throw DimensionMismatch("trace_pipj: basis shape mismatch");
    const double t = static_cast<double>(qi.rows());
    const double p = static_cast<double>(qi.cols());
    const Matrix g = qi.transpose() * qj;
    TracePair out;
    out.tr_pipj = t - 2.0 * p + g.squaredNorm();
    out.tr_pipj_sq = t - 2.0 * p + (g.transpose() * g).squaredNorm();
    return out;
}

}  // namespace csd
