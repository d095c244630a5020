#pragma once

#include "csd/panel.hpp"

namespace csd {

// Symmetric N x N matrix of residual cross-correlations, unit diagonal.
struct CorrMatrix {
    Matrix rho;

    int n() const { return static_cast<int>(rho.rows()); }
};

// rho_ij = sum_t e_it e_jt / sqrt(sum_t e_it^2 sum_t e_jt^2).
// Throws DegenerateResidual if any residual row has zero norm, and
// NumericalError if an entry overshoots [-1, 1] by more than 1e-12.
CorrMatrix residual_correlations(const ResidualSet& resids);

namespace ref {
// Plain scalar-loop implementation kept as the serial reference.
CorrMatrix residual_correlations_serial(const ResidualSet& resids);
}  // namespace ref

}  // namespace csd
