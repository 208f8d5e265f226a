// Recover photon-number distributions from click histograms: unconstrained
// linear inversion, bootstrap error bars, Poissonian maximum likelihood, EM,
// and single-shot confidence.
#pragma once

#include <cstdint>
#include <vector>

#include "pnrd/conditional_matrix.hpp"
#include "pnrd/detector_model.hpp"
#include "pnrd/simulator.hpp"

namespace pnrd {

struct InversionResult {
    PhotonDistribution distribution;  // signed_values = true, negatives kept
    double condition_number = 0.0;    // 1-norm condition of the solved system
    bool least_squares = false;       // true when the system was non-square
};

// Solves p(k) = sum_n p(k|n) rho(n) on the empirical frequencies. No
// renormalization, negatives are reported as-is. Throws std::runtime_error
// when the condition number exceeds cond_limit.
InversionResult direct_invert(const ConditionalMatrix& matrix, const CountHistogram& hist,
                              double cond_limit = 1e12);

struct BootstrapResult {
    std::vector<double> std_dev;  // per photon-number bin
    bool degenerate = false;      // resamples < 2
};

// Multinomial resampling of the histogram, one inversion per resample.
// Deterministic for a fixed seed; resamples use independent substreams.
BootstrapResult bootstrap_errors(const ConditionalMatrix& matrix, const CountHistogram& hist,
                                 int resamples, std::uint64_t seed);

// Predicted sampling standard deviation of the direct inversion when the
// clicks follow the given model law. Complements the multinomial bootstrap,
// which collapses to zero on bins with no observed events.
std::vector<double> direct_inversion_model_std(const ConditionalMatrix& matrix,
                                               const std::vector<double>& click_probs,
                                               std::uint64_t trials);

struct MleResult {
    double mean = 0.0;
    double log_likelihood = 0.0;
    bool at_boundary = false;
};

// Fits a Poissonian mean to the histogram through the conditional matrix.
// The Poisson prior is truncated at the matrix's n_max and renormalized;
// the 1-D search runs over [0, mean_max] (default n_max) to 1e-6 in the mean.
MleResult mle_poisson_mean(const ConditionalMatrix& matrix, const CountHistogram& hist,
                           double mean_max = -1.0);

// Truncated, renormalized Poisson of the fitted mean, for comparison plots.
PhotonDistribution mle_fitted_distribution(const MleResult& fit, int n_max);

struct EmResult {
    PhotonDistribution distribution;  // nonnegative, normalized
    int iterations = 0;
    bool converged = false;
    std::vector<double> log_likelihood_trace;  // one entry per iteration
};

// Expectation-maximization from a uniform start; stops when the max-norm
// update drops below tol or max_iters is reached.
EmResult em_reconstruct(const ConditionalMatrix& matrix, const CountHistogram& hist,
                        int max_iters = 100000, double tol = 1e-10);

// Posterior probability that l clicks were triggered by exactly l photons,
// for a Poissonian prior of the given pre-loss mean; eta acts binomially on
// each photon before the multinomial spreading.
double confidence(const ModeProbabilities& modes, double prior_mean, double eta, int l);

// Log-likelihood of the histogram under a given forward click distribution.
double histogram_log_likelihood(const CountHistogram& hist,
                                const std::vector<double>& click_probs);

}  // namespace pnrd
