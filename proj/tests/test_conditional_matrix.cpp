#include <doctest.h>

#include <stdexcept>

#include <random>

#include "oracles.hpp"
#include "pnrd/conditional_matrix.hpp"
#include "pnrd/detector_model.hpp"

using namespace pnrd;

namespace {

ModeProbabilities random_modes(std::mt19937_64& rng, int N) {
    std::uniform_real_distribution<double> u(0.05, 1.0);
    ModeProbabilities m;
    double sum = 0.0;
    for (int i = 0; i < N; ++i) {
        m.q.push_back(u(rng));
        sum += m.q.back();
    }
    const double loss_frac = std::uniform_real_distribution<double>(0.0, 0.5)(rng);
    for (double& qi : m.q) qi *= (1.0 - loss_frac) / sum;
    m.q_loss = loss_frac;
    return m;
}

}  // namespace

TEST_CASE("occupancy basics on the balanced lossless tree") {
    const auto modes = build_mode_probabilities(DetectorConfig::balanced(3));
    auto p0 = occupancy_distribution(modes, 0);
    CHECK(p0[0] == doctest::Approx(1.0));

    auto p1 = occupancy_distribution(modes, 1);
    CHECK(p1[1] == doctest::Approx(1.0));

    auto p2 = occupancy_distribution(modes, 2);
    CHECK(p2[1] == doctest::Approx(1.0 / 8.0));
    CHECK(p2[2] == doctest::Approx(7.0 / 8.0));

    CHECK_THROWS_AS(occupancy_distribution(modes, -1), std::invalid_argument);
}

TEST_CASE("occupancy equals exhaustive enumeration for small unbalanced trees") {
    std::mt19937_64 rng(23);
    for (int N = 1; N <= 4; ++N) {
        for (int rep = 0; rep < 5; ++rep) {
            const auto modes = random_modes(rng, N);
            for (int n = 0; n <= 5; ++n) {
                const auto fast = occupancy_distribution(modes, n);
                const auto slow = oracles::occupancy_by_enumeration(modes, n);
                for (int k = 0; k <= N; ++k)
                    CHECK(fast[k] == doctest::Approx(slow[k]).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("balanced lossless occupancy matches the Stirling closed form") {
    const auto modes = build_mode_probabilities(DetectorConfig::balanced(3));
    for (int n = 0; n <= 8; ++n) {
        const auto p = occupancy_distribution(modes, n);
        for (int k = 0; k <= 8; ++k)
            CHECK(p[k] ==
                  doctest::Approx(oracles::balanced_occupancy_closed_form(8, n, k))
                      .epsilon(1e-12));
    }
}

TEST_CASE("loss matrix") {
    SUBCASE("eta = 1 is the identity") {
        const auto L = loss_matrix(1.0, 4);
        for (int n = 0; n <= 4; ++n)
            for (int m = 0; m <= 4; ++m)
                CHECK(L[m][n] == doctest::Approx(m == n ? 1.0 : 0.0));
    }
    SUBCASE("eta = 0.5, n = 2 column is (0.25, 0.5, 0.25)") {
        const auto L = loss_matrix(0.5, 3);
        CHECK(L[0][2] == doctest::Approx(0.25));
        CHECK(L[1][2] == doctest::Approx(0.5));
        CHECK(L[2][2] == doctest::Approx(0.25));
    }
    SUBCASE("eta = 0.7, n = 3, m = 2") {
        const auto L = loss_matrix(0.7, 3);
        CHECK(L[2][3] == doctest::Approx(3 * 0.49 * 0.3));
    }
    SUBCASE("columns sum to 1") {
        const auto L = loss_matrix(0.37, 6);
        for (int n = 0; n <= 6; ++n) {
            double s = 0.0;
            for (int m = 0; m <= 6; ++m) s += L[m][n];
            CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
    SUBCASE("invalid eta rejected") {
        CHECK_THROWS_AS(loss_matrix(1.1, 3), std::invalid_argument);
    }
}

TEST_CASE("conditional matrix columns are stochastic") {
    std::mt19937_64 rng(31);
    for (int rep = 0; rep < 5; ++rep) {
        const auto modes = random_modes(rng, 8);
        const auto M = build_matrix(modes, 8);
        for (int n = 0; n <= 8; ++n) {
            double s = 0.0;
            for (int k = 0; k <= 8; ++k) {
                CHECK(M.at(k, n) >= 0.0);
                CHECK(M.at(k, n) <= 1.0 + 1e-12);
                if (k > n) CHECK(M.at(k, n) == doctest::Approx(0.0).epsilon(1e-12));
                s += M.at(k, n);
            }
            CHECK(s == doctest::Approx(1.0).epsilon(1e-10));
        }
    }
}

TEST_CASE("factorized form agrees with the direct computation on balanced trees") {
    SUBCASE("lossless: identity loss channel") {
        const auto modes = build_mode_probabilities(DetectorConfig::balanced(3));
        const auto direct = build_matrix(modes, 8);
        const auto fact = build_matrix_factorized(modes, 8);
        for (int k = 0; k <= 8; ++k)
            for (int n = 0; n <= 8; ++n)
                CHECK(fact.at(k, n) == doctest::Approx(direct.at(k, n)).epsilon(1e-12));
    }
    SUBCASE("uniform survival 0.7") {
        const auto modes = build_mode_probabilities(DetectorConfig::balanced(3, 0.7));
        const auto direct = build_matrix(modes, 8);
        const auto fact = build_matrix_factorized(modes, 8);
        for (int k = 0; k <= 8; ++k)
            for (int n = 0; n <= 8; ++n)
                CHECK(std::abs(fact.at(k, n) - direct.at(k, n)) < 1e-10);
        // independent brute-force check for small n
        for (int n = 0; n <= 4; ++n) {
            const auto slow = oracles::occupancy_by_enumeration(modes, n);
            for (int k = 0; k <= 8; ++k)
                CHECK(fact.at(k, n) == doctest::Approx(slow[k]).epsilon(1e-10));
        }
    }
    SUBCASE("unbalanced trees refuse the factorized form") {
        std::mt19937_64 rng(37);
        const auto modes = random_modes(rng, 4);
        CHECK_THROWS_AS(build_matrix_factorized(modes, 4), std::invalid_argument);
    }
}

TEST_CASE("truncation error behaves as documented") {
    const auto modes = build_mode_probabilities(DetectorConfig::balanced(3));
    CHECK(truncation_error_poisson(modes, 8, 0.0) == doctest::Approx(0.0).epsilon(1e-12));
    for (double mean : {0.5, 1.0, 2.0, 3.0})
        CHECK(truncation_error_poisson(modes, 8, mean) < 0.01);
    CHECK(truncation_error_poisson(modes, 8, 8.0) >
          truncation_error_poisson(modes, 8, 3.0));
}
