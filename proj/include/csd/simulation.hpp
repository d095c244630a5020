#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "csd/outcome.hpp"
#include "csd/panel.hpp"
#include "csd/rng.hpp"

namespace csd {

enum class ErrorProcess { AR1, ARMA11, IID };
enum class Innovation { Normal, T6, Chi5 };
enum class AltKind { None, Sma, Sparse, Density };

struct McConfig {
    int n_units = 100;
    int n_periods = 200;
    int n_regressors = 3; // p, intercept included
    ErrorProcess process = ErrorProcess::AR1;
    Innovation innovation = Innovation::Normal;
    AltKind alt = AltKind::None;
    double delta = 0.2; // SMA strength
    int density_k = 0;  // support size for the density sweep
    int reps = 1000;
    double alpha = 0.05;
    std::uint64_t seed = 0;
    double nu = 1.42;
    bool fixed_design = false;    // redraw coefficients/regressors each rep when false
    bool run_extra_lm = false;    // also run LM_BP and LM_FJLX
    int threads = 0;              // 0 = library default, 1 = serial

    void validate() const;
};

struct McReport {
    McConfig config;
    int reps_completed = 0;
    // Per method: rejection count and per-replication failure count.
    std::map<Method, int> rejections;
    std::map<Method, int> failures;
    int psi_repairs = 0; // eigen-repairs applied to Psi draws

    double rejection_rate(Method m) const;
    double mc_std_error(Method m) const;
    std::vector<Method> methods() const;
};

// One replication's outcomes; methods that errored carry a message instead.
struct RepOutcome {
    std::map<Method, TestOutcome> outcomes;
    std::map<Method, std::string> errors;
    bool psi_repaired = false;
};

// ---- DGP pieces (section references live in the runner, not here) ----

// alpha_i ~ N(0,1); beta_li ~ N(1, 0.04) for the p-1 slope columns.
void gen_coefficients(RngStream& rng, int n, int p, Vector& alpha, Matrix& beta);

// Intercept column plus AR(0.6) regressors with 51-step burn-in and
// innovation variance psi^2/(1-0.36), psi^2 ~ chi2(6)/6.
std::vector<Matrix> gen_regressors(RngStream& rng, int n, int t, int p);

// Apply the error recursion to a given innovation sequence (test hook and
// building block for gen_null_errors / sigma_oracle).
Vector error_filter(const Vector& innovations, ErrorProcess process);

// N x T null errors: row i from an independent derived stream.
Matrix gen_null_errors(RngStream& rng, int n, int t, ErrorProcess process, Innovation innovation);

// Exact finite-sample column covariance of the error recursion started at
// epsilon_1 = e_1, built from unit impulse responses (Sigma = LL').
Matrix sigma_oracle(ErrorProcess process, int t);

// Spatial moving average contamination; boundary rows use 0.5*delta on
// their single neighbor.
Matrix apply_sma(const Matrix& errors, double delta);

// Sparse row-covariance factor: support of size ceil(N^0.3), off-diagonal
// entries U[sqrt(4 log N / T), sqrt(6 log N / T)], eigen-repaired so the
// minimum eigenvalue is at least 1e-6. *repaired reports whether the
// repair fired.
Matrix gen_sparse_psi(RngStream& rng, int n, int t, bool* repaired = nullptr);

// Density-sweep variant: support of size k, entries
// U[sqrt(7/k log N / T), sqrt(9/k log N / T)].
Matrix gen_density_psi(RngStream& rng, int n, int t, int k, bool* repaired = nullptr);

// errors -> Psi^{1/2} errors via symmetric eigendecomposition.
Matrix apply_psi_sqrt(const Matrix& psi, const Matrix& errors);

// Theoretical sigma^2_{S_N} given the true column covariance and the
// realized per-unit orthonormal bases:
//   2/(N(N-1)) sum_{i<j} tr(M_i M_j) / (tr(M_i) tr(M_j)),  M_i = P_i Sigma P_i.
// Evaluated through low-rank trace identities; the dense assembly is the
// test oracle for this function.
double oracle_sigma2_sn(const Matrix& sigma, const std::vector<Matrix>& bases);

// Generate the full panel for one replication (shared by the runner and
// the acceptance suite, which needs the raw statistics).
PanelDataset gen_panel(const McConfig& config, std::uint64_t rep, bool* psi_repaired = nullptr);

// Run all tests for one replication.
RepOutcome run_replication(const McConfig& config, std::uint64_t rep);

// Replications in parallel (OpenMP), aggregated in replication order so the
// report is bitwise independent of the worker count.
McReport run_monte_carlo(const McConfig& config);

namespace ref {
// Plain sequential runner kept as the reference implementation.
McReport run_monte_carlo_serial(const McConfig& config);
}  // namespace ref

}  // namespace csd
