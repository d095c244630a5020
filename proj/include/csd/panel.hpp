#pragma once

#include <Eigen/Dense>
#include <vector>

namespace csd {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Balanced panel: N units observed over T periods with p regressors each
// (the intercept, when present, is a column of ones in x).
struct PanelDataset {
    int n_units = 0;      // N
    int n_periods = 0;    // T
    int n_regressors = 0; // p
    Matrix y;             // N x T
    std::vector<Matrix> x; // per unit, T x p

    // Throws InputError / DimensionMismatch on violated invariants
    // (N >= 3, T > p >= 1, shapes consistent).
    void validate() const;
};

struct UnitFit {
    Vector beta;  // p
    Vector resid; // T
    Matrix q;     // T x p, orthonormal columns spanning col(x)
};

// Per-unit OLS via Householder QR; q is the thin orthonormal factor.
// Throws RankDeficient when the smallest R diagonal falls below
// rank_tol times the largest.
UnitFit fit_unit_ols(const Matrix& x, const Vector& y, double rank_tol = 1e-10);

struct ResidualSet {
    Matrix resid;                    // N x T
    std::vector<Vector> beta_hat;    // per unit
    Vector resid_sq_norm;            // per unit squared norms
    std::vector<Matrix> ortho_basis; // per unit T x p

    int n_units() const { return static_cast<int>(resid.rows()); }
    int n_periods() const { return static_cast<int>(resid.cols()); }
    int n_regressors() const { return ortho_basis.empty() ? 0 : static_cast<int>(ortho_basis.front().cols()); }
};

ResidualSet build_residuals(const PanelDataset& data);

struct TracePair {
    double tr_pipj;    // tr(P_i P_j)
    double tr_pipj_sq; // tr((P_i P_j)^2)
};

// Closed forms from the orthonormal bases: with G = q_i' q_j,
// tr(P_i P_j) = T - 2p + |G|_F^2 and tr((P_i P_j)^2) = T - 2p + |G'G|_F^2.
TracePair trace_pipj(const Matrix& qi, const Matrix& qj);

}  // namespace csd
