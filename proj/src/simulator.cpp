#include "pnrd/simulator.hpp"

#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "pnrd/distributions.hpp"

namespace pnrd {

InputState InputState::poisson(double mean, int n_cut) {
    if (mean < 0.0) throw std::invalid_argument("Poisson mean must be non-negative");
    if (n_cut < 0) throw std::invalid_argument("n_cut must be non-negative");
    InputState s;
    s.pmf = truncated_poisson(mean, n_cut);
    return s;
}

InputState InputState::fock(int n) {
    if (n < 0) throw std::invalid_argument("Fock number must be non-negative");
    InputState s;
    s.pmf.assign(n + 1, 0.0);
    s.pmf[n] = 1.0;
    return s;
}

InputState InputState::from_distribution(std::vector<double> rho) {
    if (rho.empty()) throw std::invalid_argument("empty distribution");
    double sum = 0.0;
    for (double v : rho) {
        if (v < 0.0) throw std::invalid_argument("distribution entries must be non-negative");
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("distribution must sum to 1, got " + std::to_string(sum));
    for (double& v : rho) v /= sum;
    InputState s;
    s.pmf = std::move(rho);
    return s;
}

std::uint64_t CountHistogram::total() const {
    return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

std::vector<double> CountHistogram::frequencies() const {
    const double T = static_cast<double>(total());
    if (T == 0.0) throw std::invalid_argument("empty histogram");
    std::vector<double> f(counts.size());
    for (std::size_t k = 0; k < counts.size(); ++k) f[k] = counts[k] / T;
    return f;
}

SimulationResult sample_clicks(const ModeProbabilities& modes, const InputState& input,
                               std::uint64_t trials, std::uint64_t seed,
                               double dark_count_prob, bool keep_records) {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (!(dark_count_prob >= 0.0 && dark_count_prob <= 1.0))
        throw std::invalid_argument("dark_count_prob must lie in [0,1]");
    const int N = modes.mode_count();

    std::mt19937_64 rng(seed);
    std::discrete_distribution<int> draw_n(input.pmf.begin(), input.pmf.end());
    std::vector<double> bins(modes.q);
    bins.push_back(modes.q_loss);
    std::discrete_distribution<int> draw_mode(bins.begin(), bins.end());
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    SimulationResult result;
    result.histogram.counts.assign(N + 1, 0);
    if (keep_records) result.records.reserve(trials);

    std::vector<int> occupancy(N);
    for (std::uint64_t t = 0; t < trials; ++t) {
        std::fill(occupancy.begin(), occupancy.end(), 0);
        const int n = draw_n(rng);
        for (int j = 0; j < n; ++j) {
            const int mode = draw_mode(rng);
            if (mode < N) ++occupancy[mode];
        }
        if (dark_count_prob > 0.0)
            for (int i = 0; i < N; ++i)
                if (unit(rng) < dark_count_prob) ++occupancy[i];
        int k = 0;
        for (int i = 0; i < N; ++i)
            if (occupancy[i] > 0) ++k;
        ++result.histogram.counts[k];
        if (keep_records) {
            ClickRecord rec;
            rec.trial = t;
            for (int i = 0; i < N; ++i)
                if (occupancy[i] > 0) rec.fired_modes.push_back(i);
            result.records.push_back(std::move(rec));
        }
    }
    return result;
}

std::vector<double> exact_click_distribution(const ConditionalMatrix& matrix,
                                             const InputState& input) {
    if (input.n_cut() > matrix.n_max)
        throw std::invalid_argument("input extends beyond the matrix truncation order");
    std::vector<double> p(matrix.n_modes + 1, 0.0);
    for (int k = 0; k <= matrix.n_modes; ++k)
        for (int n = 0; n <= input.n_cut(); ++n) p[k] += matrix.p[k][n] * input.pmf[n];
    return p;
}

}  // namespace pnrd
