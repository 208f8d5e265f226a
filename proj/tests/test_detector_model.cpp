#include <doctest.h>

#include <stdexcept>

#include <numeric>
#include <random>

#include "pnrd/detector_model.hpp"

using namespace pnrd;

namespace {

DetectorConfig random_config(std::mt19937_64& rng, int stages) {
    std::uniform_real_distribution<double> ratio(0.05, 0.95), trans(0.5, 1.0);
    DetectorConfig cfg;
    cfg.stages = stages;
    cfg.couplers.resize((std::size_t(1) << stages) - 1);
    for (auto& c : cfg.couplers) c.ratio = ratio(rng);
    cfg.segment_transmissions.resize(2 * cfg.couplers.size());
    for (auto& t : cfg.segment_transmissions) t = trans(rng);
    cfg.detector_efficiency = trans(rng);
    return cfg;
}

}  // namespace

TEST_CASE("balanced lossless tree gives uniform mode probabilities") {
    const auto modes = build_mode_probabilities(DetectorConfig::balanced(3));
    REQUIRE(modes.mode_count() == 8);
    for (double qi : modes.q) CHECK(qi == doctest::Approx(0.125).epsilon(1e-12));
    CHECK(modes.q_loss == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("single stage with ratio 0.6 splits 0.6/0.4") {
    DetectorConfig cfg;
    cfg.stages = 1;
    cfg.couplers = {{0.6}};
    cfg.segment_transmissions = {1.0, 1.0};
    const auto modes = build_mode_probabilities(cfg);
    // bit 1 selects the delayed arm, which carries the ratio fraction
    CHECK(modes.q[1] == doctest::Approx(0.6));
    CHECK(modes.q[0] == doctest::Approx(0.4));
    CHECK(modes.q_loss == doctest::Approx(0.0));
}

TEST_CASE("overall transmission 0.56 leaves q_loss 0.44") {
    const auto modes = build_mode_probabilities(DetectorConfig::balanced(3, 0.56));
    const double total = std::accumulate(modes.q.begin(), modes.q.end(), 0.0);
    CHECK(total == doctest::Approx(0.56).epsilon(1e-12));
    CHECK(modes.q_loss == doctest::Approx(0.44).epsilon(1e-12));
}

TEST_CASE("normalization holds for random configs") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const auto modes = build_mode_probabilities(random_config(rng, 1 + trial % 4));
        double sum = modes.q_loss;
        for (double qi : modes.q) {
            CHECK(qi >= 0.0);
            sum += qi;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("decreasing a segment transmission never increases any mode probability") {
    std::mt19937_64 rng(11);
    auto cfg = random_config(rng, 3);
    const auto before = build_mode_probabilities(cfg);
    std::uniform_int_distribution<std::size_t> pick(0, cfg.segment_transmissions.size() - 1);
    for (int trial = 0; trial < 20; ++trial) {
        auto worse = cfg;
        worse.segment_transmissions[pick(rng)] *= 0.5;
        const auto after = build_mode_probabilities(worse);
        for (int i = 0; i < before.mode_count(); ++i)
            CHECK(after.q[i] <= before.q[i] + 1e-15);
        CHECK(after.q_loss >= before.q_loss - 1e-15);
    }
}

TEST_CASE("permuting couplers within a column permutes the mode probabilities") {
    std::mt19937_64 rng(13);
    auto cfg = random_config(rng, 3);
    // uniform segments and balanced upstream columns: every path into the
    // last column then carries the same weight, so a permutation there can
    // only reshuffle which mode gets which leaf split
    std::fill(cfg.segment_transmissions.begin(), cfg.segment_transmissions.end(), 0.9);
    for (int c = 0; c < 3; ++c) cfg.couplers[c].ratio = 0.5;
    auto before = build_mode_probabilities(cfg).q;

    auto swapped = cfg;  // swap two couplers in the last column (nodes 3..6)
    std::swap(swapped.couplers[3], swapped.couplers[5]);
    auto after = build_mode_probabilities(swapped).q;

    std::sort(before.begin(), before.end());
    std::sort(after.begin(), after.end());
    for (std::size_t i = 0; i < before.size(); ++i)
        CHECK(after[i] == doctest::Approx(before[i]).epsilon(1e-12));
}

TEST_CASE("config validation rejects broken trees and bad parameters") {
    DetectorConfig cfg = DetectorConfig::balanced(2);
    cfg.couplers.pop_back();
    CHECK_THROWS_AS(build_mode_probabilities(cfg), std::invalid_argument);

    cfg = DetectorConfig::balanced(2);
    cfg.couplers[0].ratio = 1.4;
    CHECK_THROWS_AS(build_mode_probabilities(cfg), std::invalid_argument);

    cfg = DetectorConfig::balanced(2);
    cfg.detector_efficiency = -0.1;
    CHECK_THROWS_AS(build_mode_probabilities(cfg), std::invalid_argument);
}

TEST_CASE("timing report on the reference figures") {
    DetectorConfig cfg = DetectorConfig::balanced(3);
    cfg.timing.separations_ns = {108, 120, 132, 140, 152, 164};
    cfg.timing.dead_time_ns = 50;
    cfg.timing.gate_width_ns = 45;
    const auto report = validate_timing(cfg);
    CHECK(report.feasible);
    CHECK(report.gates_non_overlapping);
    CHECK(report.min_margin_ns == doctest::Approx(58.0));
}

TEST_CASE("timing infeasible when separation is below the dead time") {
    DetectorConfig cfg = DetectorConfig::balanced(1);
    cfg.timing.separations_ns = {40};
    cfg.timing.dead_time_ns = 50;
    const auto report = validate_timing(cfg);
    CHECK_FALSE(report.feasible);
    CHECK(report.min_margin_ns == doctest::Approx(-10.0));
}
