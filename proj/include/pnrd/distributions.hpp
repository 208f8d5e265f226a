#pragma once

#include <vector>

namespace pnrd {

double poisson_pmf(double mean, int n);

// Poisson pmf truncated to 0..n_cut and renormalized.
std::vector<double> truncated_poisson(double mean, int n_cut);

}  // namespace pnrd
