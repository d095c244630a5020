#pragma once

#include "csd/outcome.hpp"

namespace csd {

inline constexpr double kPFloor = 1e-300;

// T_C = -2 log p_l - 2 log p_s. Inputs are clamped to [kPFloor, 1] first;
// values outside (0, 1] before clamping are a caller error.
double fisher_combine(double p_l, double p_s);

// chi-square(4) calibrated combination of the max- and sum-test p-values.
TestOutcome combined_test(const TestOutcome& max_out, const TestOutcome& sum_out, double alpha);

}  // namespace csd
