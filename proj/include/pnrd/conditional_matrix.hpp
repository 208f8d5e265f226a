// Exact click statistics: p(k|n) for k clicking modes out of n incident
// photons, spread multinomially over the temporal modes.
#pragma once

#include <functional>
#include <vector>

#include "pnrd/detector_model.hpp"

namespace pnrd {

// Probability vector over photon number, possibly signed after an
// unconstrained inversion.
struct PhotonDistribution {
    std::vector<double> rho;           // rho[n], n = 0..n_max
    bool signed_values = false;        // true if negatives may be present

    int n_max() const { return static_cast<int>(rho.size()) - 1; }
};

// p[k][n] for k = 0..n_modes, n = 0..n_max. Columns sum to 1.
struct ConditionalMatrix {
    int n_modes = 0;
    int n_max = 0;
    std::vector<std::vector<double>> p;  // p[k][n]

    const std::vector<double>& row(int k) const { return p[k]; }
    double at(int k, int n) const { return p[k][n]; }
};

// P(exactly k modes fire | n photons), via inclusion-exclusion over mode
// subsets. Exact for arbitrary (unbalanced) q. O(2^N * N) per call.
std::vector<double> occupancy_distribution(const ModeProbabilities& modes, int n);

// Binomial loss channel: L[m][n] = C(n,m) eta^m (1-eta)^(n-m), m,n = 0..n_max.
std::vector<std::vector<double>> loss_matrix(double eta, int n_max);

// Direct inclusion-exclusion matrix. For balanced trees the factorized form
// (balanced lossless occupancy composed with the binomial loss channel of the
// overall survival) is verified against the direct computation to 1e-10; the
// factorization is not exact when per-mode survivals differ, so it is only
// checked there.
ConditionalMatrix build_matrix(const ModeProbabilities& modes, int n_max);

// Factorized form, valid for balanced trees only.
ConditionalMatrix build_matrix_factorized(const ModeProbabilities& modes, int n_max);

// Total variation distance between the exact forward click distribution of an
// analytic photon-number law (summed to exact_cutoff, default 4*n_max) and
// the forward model truncated at n_max with the input renormalized.
double truncation_error(const ModeProbabilities& modes, int n_max,
                        const std::function<double(int)>& pmf, int exact_cutoff = -1);

// Convenience wrapper for a Poissonian input of the given mean.
double truncation_error_poisson(const ModeProbabilities& modes, int n_max, double mean);

}  // namespace pnrd
