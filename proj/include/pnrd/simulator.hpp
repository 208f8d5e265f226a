// Monte Carlo click generation and the exact forward click law.
#pragma once

#include <cstdint>
#include <vector>

#include "pnrd/conditional_matrix.hpp"
#include "pnrd/detector_model.hpp"

namespace pnrd {

// Photon-number law of the light hitting the detector. Stored as a
// truncated, normalized pmf regardless of how it was built.
struct InputState {
    std::vector<double> pmf;  // pmf[n], n = 0..n_cut

    int n_cut() const { return static_cast<int>(pmf.size()) - 1; }

    static InputState poisson(double mean, int n_cut = 8);
    static InputState fock(int n);
    static InputState from_distribution(std::vector<double> rho);
};

struct CountHistogram {
    std::vector<std::uint64_t> counts;  // counts[k], k = 0..N

    std::uint64_t total() const;
    std::vector<double> frequencies() const;
};

// One trial's fired modes, sorted ascending.
struct ClickRecord {
    std::uint64_t trial = 0;
    std::vector<int> fired_modes;
};

struct SimulationResult {
    CountHistogram histogram;
    std::vector<ClickRecord> records;  // populated only when requested
};

// Per trial: draw n from the input, assign each photon to a mode or the loss
// bin by the multinomial law, count modes with >= 1 photon; every mode also
// clicks independently with dark_count_prob. Deterministic for a fixed seed.
SimulationResult sample_clicks(const ModeProbabilities& modes, const InputState& input,
                               std::uint64_t trials, std::uint64_t seed,
                               double dark_count_prob = 0.0, bool keep_records = false);

// p(k) = sum_n p(k|n) rho(n); input must be truncated at the matrix's n_max.
std::vector<double> exact_click_distribution(const ConditionalMatrix& matrix,
                                             const InputState& input);

}  // namespace pnrd
