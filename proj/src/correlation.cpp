#include "csd/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "csd/errors.hpp"

namespace csd {

namespace {

void check_norms(const ResidualSet& resids) {
    for (int i = 0; i < resids.n_units(); ++i) {
        if (resids.resid_sq_norm(i) <= 0.0)
            throw DegenerateResidual("residual_correlations: unit " + std::to_string(i) + " has zero residual norm");
    }
}

double clip_entry(double r, int i, int j) {
    const double over = std::abs(r) - 1.0;
    if (over > 1e-12)
        throw NumericalError("residual_correlations: |rho(" + std::to_string(i) + "," + std::to_string(j) +
                             ")| exceeds 1 beyond tolerance");
    return std::clamp(r, -1.0, 1.0);
}

}  // namespace

CorrMatrix residual_correlations(const ResidualSet& resids) {
    check_norms(resids);
    const int n = resids.n_units();
    CorrMatrix corr;
    corr.rho = Matrix::Identity(n, n);

    Vector inv_norm(n);
    for (int i = 0; i < n; ++i) inv_norm(i) = 1.0 / std::sqrt(resids.resid_sq_norm(i));

    // Exceptions cannot cross an OpenMP region; record the first offending
    // pair and rethrow afterwards.
    int bad_i = -1, bad_j = -1;
#pragma omp parallel for schedule(dynamic, 4)
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double r = resids.resid.row(i).dot(resids.resid.row(j)) * inv_norm(i) * inv_norm(j);
            if (std::abs(r) - 1.0 > 1e-12) {
#pragma omp critical
                {
                    if (bad_i < 0 || i < bad_i || (i == bad_i && j < bad_j)) {
                        bad_i = i;
                        bad_j = j;
                    }
                }
                continue;
            }
            const double c = std::clamp(r, -1.0, 1.0);
            corr.rho(i, j) = c;
            corr.rho(j, i) = c;
        }
    }
    if (bad_i >= 0)
        throw NumericalError("residual_correlations: |rho(" + std::to_string(bad_i) + "," + std::to_string(bad_j) +
                             ")| exceeds 1 beyond tolerance");
    return corr;
}

namespace ref {

CorrMatrix residual_correlations_serial(const ResidualSet& resids) {
    check_norms(resids);
    const int n = resids.n_units();
    const int t = resids.n_periods();
    CorrMatrix corr;
    corr.rho = Matrix::Identity(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            double dot = 0.0;
            for (int s = 0; s < t; ++s) dot += resids.resid(i, s) * resids.resid(j, s);
            const double r = dot / std::sqrt(resids.resid_sq_norm(i) * resids.resid_sq_norm(j));
            const double c = clip_entry(r, i, j);
            corr.rho(i, j) = c;
            corr.rho(j, i) = c;
        }
    }
    return corr;
}

}  // namespace ref

}  // namespace csd
