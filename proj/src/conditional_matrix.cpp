#include "pnrd/conditional_matrix.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include "pnrd/distributions.hpp"

namespace pnrd {

namespace {

double binom(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    if (k == 0 || k == n) return 1.0;
    return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
}

}  // namespace

double poisson_pmf(double mean, int n) {
    if (mean < 0.0) throw std::invalid_argument("Poisson mean must be non-negative");
    if (mean == 0.0) return n == 0 ? 1.0 : 0.0;
    return std::exp(-mean + n * std::log(mean) - std::lgamma(n + 1.0));
}

std::vector<double> truncated_poisson(double mean, int n_cut) {
    std::vector<double> p(n_cut + 1);
    double sum = 0.0;
    for (int n = 0; n <= n_cut; ++n) sum += p[n] = poisson_pmf(mean, n);
    for (double& v : p) v /= sum;
    return p;
}

std::vector<double> occupancy_distribution(const ModeProbabilities& modes, int n) {
    if (n < 0) throw std::invalid_argument("photon number must be non-negative");
    const int N = modes.mode_count();
    if (N > 20) throw std::invalid_argument("mode count too large for subset enumeration");
    const std::size_t subsets = std::size_t(1) << N;

    // subset sums q_loss + sum_{i in T} q_i, built incrementally
    std::vector<double> s(subsets);
    s[0] = modes.q_loss;
    for (std::size_t mask = 1; mask < subsets; ++mask) {
        const std::size_t low = mask & (~mask + 1);
        s[mask] = s[mask ^ low] + modes.q[std::countr_zero(low)];
    }

    // P(k) = sum_{T, |T|<=k} (-1)^(k-|T|) C(N-|T|, k-|T|) s_T^n
    std::vector<double> out(N + 1, 0.0);
    for (std::size_t mask = 0; mask < subsets; ++mask) {
        const int t = std::popcount(mask);
        const double sn = std::pow(s[mask], n);
        for (int k = t; k <= N; ++k) {
            const double sign = ((k - t) & 1) ? -1.0 : 1.0;
            out[k] += sign * binom(N - t, k - t) * sn;
        }
    }
    for (double& v : out)
        if (v < 0.0 && v > -1e-12) v = 0.0;  // cancellation noise
    return out;
}

std::vector<std::vector<double>> loss_matrix(double eta, int n_max) {
    if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("eta must lie in [0,1]");
    if (n_max < 0) throw std::invalid_argument("n_max must be non-negative");
    std::vector<std::vector<double>> L(n_max + 1, std::vector<double>(n_max + 1, 0.0));
    for (int n = 0; n <= n_max; ++n)
        for (int m = 0; m <= n; ++m)
            L[m][n] = binom(n, m) * std::pow(eta, m) * std::pow(1.0 - eta, n - m);
    return L;
}

ConditionalMatrix build_matrix(const ModeProbabilities& modes, int n_max) {
    if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
    ConditionalMatrix M;
    M.n_modes = modes.mode_count();
    M.n_max = n_max;
    M.p.assign(M.n_modes + 1, std::vector<double>(n_max + 1, 0.0));
    for (int n = 0; n <= n_max; ++n) {
        const auto col = occupancy_distribution(modes, n);
        for (int k = 0; k <= M.n_modes; ++k) M.p[k][n] = col[k];
    }
    if (modes.balanced()) {
        const ConditionalMatrix F = build_matrix_factorized(modes, n_max);
        for (int k = 0; k <= M.n_modes; ++k)
            for (int n = 0; n <= n_max; ++n)
                if (std::abs(M.p[k][n] - F.p[k][n]) > 1e-10)
                    throw std::runtime_error("factorized form disagrees with direct computation");
    }
    return M;
}

ConditionalMatrix build_matrix_factorized(const ModeProbabilities& modes, int n_max) {
    if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
    if (!modes.balanced())
        throw std::invalid_argument("factorized form requires a balanced tree");
    const int N = modes.mode_count();

    ModeProbabilities uniform;
    uniform.q.assign(N, 1.0 / N);
    uniform.q_loss = 0.0;

    const auto L = loss_matrix(modes.survival(), n_max);
    ConditionalMatrix M;
    M.n_modes = N;
    M.n_max = n_max;
    M.p.assign(N + 1, std::vector<double>(n_max + 1, 0.0));
    for (int m = 0; m <= n_max; ++m) {
        const auto occ = occupancy_distribution(uniform, m);
        for (int n = m; n <= n_max; ++n)
            for (int k = 0; k <= N; ++k) M.p[k][n] += occ[k] * L[m][n];
    }
    return M;
}

double truncation_error(const ModeProbabilities& modes, int n_max,
                        const std::function<double(int)>& pmf, int exact_cutoff) {
    if (exact_cutoff < 0) exact_cutoff = 4 * n_max;
    const int N = modes.mode_count();

    // exact forward distribution, input summed to the high cutoff
    std::vector<double> exact(N + 1, 0.0);
    double mass = 0.0;
    for (int n = 0; n <= exact_cutoff; ++n) {
        const double w = pmf(n);
        mass += w;
        const auto col = occupancy_distribution(modes, n);
        for (int k = 0; k <= N; ++k) exact[k] += w * col[k];
    }
    for (double& v : exact) v /= mass;

    // truncated forward model, input renormalized over 0..n_max
    std::vector<double> trunc(N + 1, 0.0);
    double tmass = 0.0;
    for (int n = 0; n <= n_max; ++n) {
        const double w = pmf(n);
        tmass += w;
        const auto col = occupancy_distribution(modes, n);
        for (int k = 0; k <= N; ++k) trunc[k] += w * col[k];
    }
    for (double& v : trunc) v /= tmass;

    double tv = 0.0;
    for (int k = 0; k <= N; ++k) tv += std::abs(exact[k] - trunc[k]);
    return 0.5 * tv;
}

double truncation_error_poisson(const ModeProbabilities& modes, int n_max, double mean) {
    return truncation_error(
        modes, n_max, [mean](int n) { return poisson_pmf(mean, n); });
}

}  // namespace pnrd
