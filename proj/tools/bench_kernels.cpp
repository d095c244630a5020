// Timing comparison of the OpenMP kernels against their serial reference
// implementations, plus the parallel vs sequential Monte Carlo runner.
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "csd/correlation.hpp"
#include "csd/max_test.hpp"
#include "csd/rng.hpp"
#include "csd/simulation.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double time_ms(const std::function<void()>& fn, int iters) {
    const auto start = Clock::now();
    for (int i = 0; i < iters; ++i) fn();
    const auto stop = Clock::now();
    return std::chrono::duration<double, std::milli>(stop - start).count() / iters;
}

void report(const char* name, double serial_ms, double parallel_ms) {
    std::printf("%-28s serial %9.3f ms   parallel %9.3f ms   speedup %.2fx\n", name, serial_ms, parallel_ms,
                serial_ms / parallel_ms);
}

}  // namespace

int main(int argc, char** argv) {
    const int n = argc > 1 ? std::stoi(argv[1]) : 200;
    const int t = argc > 2 ? std::stoi(argv[2]) : 400;
    const int iters = argc > 3 ? std::stoi(argv[3]) : 5;

    csd::RngStream rng(42, 0);
    csd::ResidualSet resids;
    resids.resid.resize(n, t);
    for (int i = 0; i < n; ++i)
        for (int s = 0; s < t; ++s) resids.resid(i, s) = rng.normal();
    resids.resid_sq_norm = resids.resid.rowwise().squaredNorm();

    std::printf("kernel benchmark: N=%d T=%d (%d iterations each)\n", n, t, iters);
    report("residual_correlations",
           time_ms([&] { (void)csd::ref::residual_correlations_serial(resids); }, iters),
           time_ms([&] { (void)csd::residual_correlations(resids); }, iters));
    report("column_sample_cov",
           time_ms([&] { (void)csd::ref::column_sample_cov_serial(resids); }, iters),
           time_ms([&] { (void)csd::column_sample_cov(resids); }, iters));

    csd::McConfig config;
    config.n_units = 25;
    config.n_periods = 60;
    config.reps = 40;
    config.seed = 7;
    report("run_monte_carlo",
           time_ms([&] { (void)csd::ref::run_monte_carlo_serial(config); }, 1),
           time_ms([&] { (void)csd::run_monte_carlo(config); }, 1));
    return 0;
}
