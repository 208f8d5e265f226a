// Independent reference computations used only by the test suites. None of
// these share code with the library paths they check.
#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <vector>

#include "pnrd/detector_model.hpp"

namespace oracles {

// Brute force: enumerate all (N+1)^n photon-to-bin assignments (bin N is the
// loss bin) and accumulate the probability of each occupancy count.
inline std::vector<double> occupancy_by_enumeration(const pnrd::ModeProbabilities& modes,
                                                    int n) {
    const int N = modes.mode_count();
    std::vector<double> bins(modes.q);
    bins.push_back(modes.q_loss);
    std::vector<double> out(N + 1, 0.0);
    std::vector<int> assignment(n, 0);
    while (true) {
        double prob = 1.0;
        std::uint32_t occupied = 0;
        for (int j = 0; j < n; ++j) {
            prob *= bins[assignment[j]];
            if (assignment[j] < N) occupied |= 1u << assignment[j];
        }
        out[std::popcount(occupied)] += prob;
        int j = 0;
        for (; j < n; ++j) {
            if (++assignment[j] <= N) break;
            assignment[j] = 0;
        }
        if (j == n) break;
    }
    return out;
}

// Stirling numbers of the second kind, exact in double for the sizes used.
inline double stirling2(int n, int k) {
    if (n == 0 && k == 0) return 1.0;
    if (n == 0 || k == 0) return 0.0;
    std::vector<std::vector<double>> S(n + 1, std::vector<double>(k + 1, 0.0));
    S[0][0] = 1.0;
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= std::min(i, k); ++j)
            S[i][j] = j * S[i - 1][j] + S[i - 1][j - 1];
    return S[n][k];
}

inline double falling_factorial(int N, int k) {
    double f = 1.0;
    for (int i = 0; i < k; ++i) f *= N - i;
    return f;
}

// Balanced lossless closed form: P(k | n) = C(N,k) k! S(n,k) / N^n.
inline double balanced_occupancy_closed_form(int N, int n, int k) {
    return falling_factorial(N, k) * stirling2(n, k) / std::pow(double(N), n);
}

// Number of successes of independent Bernoulli trials with probabilities p_i
// (Poisson-binomial), by direct convolution.
inline std::vector<double> poisson_binomial(const std::vector<double>& p) {
    std::vector<double> dist{1.0};
    for (double pi : p) {
        std::vector<double> next(dist.size() + 1, 0.0);
        for (std::size_t k = 0; k < dist.size(); ++k) {
            next[k] += dist[k] * (1.0 - pi);
            next[k + 1] += dist[k] * pi;
        }
        dist.swap(next);
    }
    return dist;
}

// Exact click law for an untruncated Poisson input: under Poisson splitting
// each mode clicks independently with probability 1 - exp(-mean * q_i).
inline std::vector<double> poisson_product_form(const pnrd::ModeProbabilities& modes,
                                                double mean) {
    std::vector<double> click_probs;
    for (double qi : modes.q) click_probs.push_back(1.0 - std::exp(-mean * qi));
    return poisson_binomial(click_probs);
}

// Chi-square critical values at alpha = 0.001 for df = 1..8.
inline double chi2_critical_001(int df) {
    static const double crit[] = {10.828, 13.816, 16.266, 18.467,
                                  20.515, 22.458, 24.322, 26.124};
    return crit[df - 1];
}

}  // namespace oracles
