#include "pnrd/reconstruction.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "pnrd/distributions.hpp"

namespace pnrd {

namespace {

using Matrix = std::vector<std::vector<double>>;

double norm1(const Matrix& A) {
    double best = 0.0;
    for (std::size_t j = 0; j < A[0].size(); ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < A.size(); ++i) s += std::abs(A[i][j]);
        best = std::max(best, s);
    }
    return best;
}

// Gauss-Jordan with partial pivoting. Throws on an exactly singular system.
Matrix invert(Matrix A) {
    const std::size_t n = A.size();
    Matrix inv(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(A[r][col]) > std::abs(A[pivot][col])) pivot = r;
        if (A[pivot][col] == 0.0) throw std::runtime_error("singular conditional matrix");
        std::swap(A[pivot], A[col]);
        std::swap(inv[pivot], inv[col]);
        const double d = A[col][col];
        for (std::size_t j = 0; j < n; ++j) {
            A[col][j] /= d;
            inv[col][j] /= d;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || A[r][col] == 0.0) continue;
            const double f = A[r][col];
            for (std::size_t j = 0; j < n; ++j) {
                A[r][j] -= f * A[col][j];
                inv[r][j] -= f * inv[col][j];
            }
        }
    }
    return inv;
}

std::vector<double> mat_vec(const Matrix& A, const std::vector<double>& x) {
    std::vector<double> y(A.size(), 0.0);
    for (std::size_t i = 0; i < A.size(); ++i)
        for (std::size_t j = 0; j < x.size(); ++j) y[i] += A[i][j] * x[j];
    return y;
}

Matrix transpose_product(const Matrix& A) {  // A^T A
    const std::size_t rows = A.size(), cols = A[0].size();
    Matrix G(cols, std::vector<double>(cols, 0.0));
    for (std::size_t i = 0; i < cols; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            for (std::size_t r = 0; r < rows; ++r) G[i][j] += A[r][i] * A[r][j];
    return G;
}

// Linear operator mapping empirical click frequencies to rho, plus its
// condition diagnostic. Shared by direct_invert and the bootstrap.
struct Inverter {
    Matrix op;  // (n_max+1) x (n_modes+1)
    double condition = 0.0;
    bool least_squares = false;

    explicit Inverter(const ConditionalMatrix& matrix, double cond_limit) {
        const Matrix& A = matrix.p;
        if (matrix.n_modes == matrix.n_max) {
            op = invert(A);
            condition = norm1(A) * norm1(op);
        } else {
            least_squares = true;
            const Matrix G = transpose_product(A);
            const Matrix Ginv = invert(G);
            condition = norm1(G) * norm1(Ginv);
            // op = G^-1 A^T
            op.assign(A[0].size(), std::vector<double>(A.size(), 0.0));
            for (std::size_t i = 0; i < op.size(); ++i)
                for (std::size_t j = 0; j < A.size(); ++j)
                    for (std::size_t m = 0; m < op.size(); ++m)
                        op[i][j] += Ginv[i][m] * A[j][m];
        }
        if (!(condition < cond_limit))
            throw std::runtime_error("conditional matrix too ill-conditioned: cond = " +
                                     std::to_string(condition) + " exceeds " +
                                     std::to_string(cond_limit));
    }
};

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

double histogram_log_likelihood(const CountHistogram& hist,
                                const std::vector<double>& click_probs) {
    double ll = 0.0;
    for (std::size_t k = 0; k < hist.counts.size(); ++k) {
        if (hist.counts[k] == 0) continue;
        ll += static_cast<double>(hist.counts[k]) *
              std::log(std::max(click_probs[k], 1e-300));
    }
    return ll;
}

InversionResult direct_invert(const ConditionalMatrix& matrix, const CountHistogram& hist,
                              double cond_limit) {
    if (static_cast<int>(hist.counts.size()) != matrix.n_modes + 1)
        throw std::invalid_argument("histogram length does not match the mode count");
    const Inverter inv(matrix, cond_limit);
    InversionResult result;
    result.distribution.rho = mat_vec(inv.op, hist.frequencies());
    result.distribution.signed_values = true;
    result.condition_number = inv.condition;
    result.least_squares = inv.least_squares;
    return result;
}

std::vector<double> direct_inversion_model_std(const ConditionalMatrix& matrix,
                                               const std::vector<double>& click_probs,
                                               std::uint64_t trials) {
    if (trials == 0) throw std::invalid_argument("trials must be >= 1");
    if (static_cast<int>(click_probs.size()) != matrix.n_modes + 1)
        throw std::invalid_argument("click law length does not match the mode count");
    const Inverter inv(matrix, 1e12);
    std::vector<double> out(inv.op.size(), 0.0);
    // multinomial: Var(rho_n) = (sum_k op^2 p_k - (sum_k op p_k)^2) / T
    for (std::size_t n = 0; n < inv.op.size(); ++n) {
        double second = 0.0, first = 0.0;
        for (std::size_t k = 0; k < click_probs.size(); ++k) {
            second += inv.op[n][k] * inv.op[n][k] * click_probs[k];
            first += inv.op[n][k] * click_probs[k];
        }
        const double var = (second - first * first) / static_cast<double>(trials);
        out[n] = var > 0.0 ? std::sqrt(var) : 0.0;
    }
    return out;
}

BootstrapResult bootstrap_errors(const ConditionalMatrix& matrix, const CountHistogram& hist,
                                 int resamples, std::uint64_t seed) {
    if (resamples < 1) throw std::invalid_argument("resamples must be >= 1");
    const std::uint64_t T = hist.total();
    if (T == 0) throw std::invalid_argument("histogram has no trials");
    const Inverter inv(matrix, 1e12);
    const std::vector<double> freq = hist.frequencies();
    const std::size_t bins = freq.size();
    const std::size_t n_out = inv.op.size();

    std::vector<double> sum(n_out, 0.0), sumsq(n_out, 0.0);
    std::vector<double> resampled(bins);
    for (int r = 0; r < resamples; ++r) {
        std::mt19937_64 rng(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(r))));
        // sequential-binomial multinomial draw of size T
        std::uint64_t left = T;
        double mass = 1.0;
        for (std::size_t k = 0; k < bins; ++k) {
            std::uint64_t c = 0;
            if (left > 0 && mass > 0.0) {
                const double p = std::min(1.0, freq[k] / mass);
                if (k + 1 == bins || p >= 1.0) {
                    c = left;
                } else {
                    std::binomial_distribution<std::uint64_t> bin(left, p);
                    c = bin(rng);
                }
            }
            resampled[k] = static_cast<double>(c) / static_cast<double>(T);
            left -= c;
            mass -= freq[k];
        }
        const auto rho = mat_vec(inv.op, resampled);
        for (std::size_t i = 0; i < n_out; ++i) {
            sum[i] += rho[i];
            sumsq[i] += rho[i] * rho[i];
        }
    }

    BootstrapResult out;
    out.std_dev.assign(n_out, 0.0);
    out.degenerate = resamples < 2;
    for (std::size_t i = 0; i < n_out; ++i) {
        const double mean = sum[i] / resamples;
        const double var = sumsq[i] / resamples - mean * mean;
        out.std_dev[i] = var > 0.0 ? std::sqrt(var) : 0.0;
    }
    return out;
}

MleResult mle_poisson_mean(const ConditionalMatrix& matrix, const CountHistogram& hist,
                           double mean_max) {
    if (hist.total() == 0) throw std::invalid_argument("histogram has no trials");
    if (mean_max < 0.0) mean_max = static_cast<double>(matrix.n_max);

    MleResult result;
    bool only_vacuum = true;
    for (std::size_t k = 1; k < hist.counts.size(); ++k)
        if (hist.counts[k] > 0) only_vacuum = false;
    if (only_vacuum) {
        result.mean = 0.0;
        result.at_boundary = true;
        InputState vac = InputState::poisson(0.0, matrix.n_max);
        result.log_likelihood =
            histogram_log_likelihood(hist, exact_click_distribution(matrix, vac));
        return result;
    }

    const auto loglik = [&](double mu) {
        const InputState in{truncated_poisson(mu, matrix.n_max)};
        return histogram_log_likelihood(hist, exact_click_distribution(matrix, in));
    };

    // golden-section maximization on [0, mean_max], tolerance 1e-6 in mu
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = 0.0, b = mean_max;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = loglik(c), fd = loglik(d);
    while (b - a > 1e-7) {
        if (fc >= fd) {  // keep the left interval on ties: prefer smaller mu
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = loglik(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = loglik(d);
        }
    }
    double mu = 0.5 * (a + b);
    double f = loglik(mu);
    // flat-at-tolerance tie-break toward the smaller mean
    const double f0 = loglik(a);
    if (f0 >= f - 1e-12 * std::abs(f)) {
        mu = a;
        f = f0;
    }
    if (!std::isfinite(f)) throw std::runtime_error("likelihood maximization failed");
    result.mean = mu;
    result.log_likelihood = f;
    result.at_boundary = mu <= 0.0 || mu >= mean_max - 1e-6;
    return result;
}

PhotonDistribution mle_fitted_distribution(const MleResult& fit, int n_max) {
    PhotonDistribution d;
    d.rho = truncated_poisson(fit.mean, n_max);
    return d;
}

EmResult em_reconstruct(const ConditionalMatrix& matrix, const CountHistogram& hist,
                        int max_iters, double tol) {
    if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
    const std::uint64_t T = hist.total();
    if (T == 0) throw std::invalid_argument("histogram has no trials");
    const std::vector<double> freq = hist.frequencies();
    const int K = matrix.n_modes, n_max = matrix.n_max;

    EmResult out;
    std::vector<double> rho(n_max + 1, 1.0 / (n_max + 1));
    std::vector<double> pk(K + 1), next(n_max + 1);
    for (int it = 0; it < max_iters; ++it) {
        for (int k = 0; k <= K; ++k) {
            pk[k] = 0.0;
            for (int n = 0; n <= n_max; ++n) pk[k] += matrix.p[k][n] * rho[n];
        }
        out.log_likelihood_trace.push_back(histogram_log_likelihood(hist, pk));
        double delta = 0.0;
        for (int n = 0; n <= n_max; ++n) {
            double factor = 0.0;
            for (int k = 0; k <= K; ++k)
                if (freq[k] > 0.0 && pk[k] > 0.0) factor += freq[k] * matrix.p[k][n] / pk[k];
            next[n] = rho[n] * factor;
            delta = std::max(delta, std::abs(next[n] - rho[n]));
        }
        rho.swap(next);
        out.iterations = it + 1;
        if (delta < tol) {
            out.converged = true;
            break;
        }
    }
    double sum = 0.0;
    for (double v : rho) sum += v;
    for (double& v : rho) v /= sum;
    out.distribution.rho = std::move(rho);
    out.distribution.signed_values = false;
    return out;
}

double confidence(const ModeProbabilities& modes, double prior_mean, double eta, int l) {
    const int N = modes.mode_count();
    if (l < 1 || l > N) throw std::invalid_argument("l must lie in 1..mode_count");
    if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("eta must lie in [0,1]");
    if (prior_mean < 0.0) throw std::invalid_argument("prior mean must be non-negative");

    // p(k=l | n surviving photons = m) for the spreading network alone
    std::vector<double> occ_l;  // occ_l[m]
    const auto occ_at = [&](int m) {
        while (static_cast<int>(occ_l.size()) <= m)
            occ_l.push_back(occupancy_distribution(modes, occ_l.size())[l]);
        return occ_l[m];
    };

    // sum over n until the Poisson tail is negligible (< 1e-12 of the mass)
    double numerator = 0.0, denominator = 0.0;
    double tail = 1.0;
    for (int n = 0; tail > 1e-14 || n <= l; ++n) {
        const double prior = poisson_pmf(prior_mean, n);
        tail -= prior;
        // binomial loss of eta before spreading
        double p_l_given_n = 0.0;
        for (int m = l; m <= n; ++m) {
            const double bin = std::exp(std::lgamma(n + 1.0) - std::lgamma(m + 1.0) -
                                        std::lgamma(n - m + 1.0)) *
                               std::pow(eta, m) * std::pow(1.0 - eta, n - m);
            p_l_given_n += bin * occ_at(m);
        }
        denominator += prior * p_l_given_n;
        if (n == l) numerator = prior * p_l_given_n;
        if (n > 200) break;
    }
    if (denominator == 0.0) return 0.0;
    return numerator / denominator;
}

}  // namespace pnrd
