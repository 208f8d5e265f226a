// Splitting-tree detector model: turns a declarative description of the
// fiber network into per-temporal-mode survival probabilities.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pnrd {

struct Coupler {
    double ratio = 0.5;  // fraction routed to the delayed arm
};

struct TimingSpec {
    std::vector<double> separations_ns;  // inter-mode delays
    double dead_time_ns = 0.0;
    double gate_width_ns = 0.0;
};

// Full description of the splitting network. The tree has `stages` coupler
// columns; column d holds 2^d couplers stored in level order (heap layout,
// root at index 0). Each coupler has two output fiber segments, segments
// 2c and 2c+1 belong to coupler c (0 = prompt arm, 1 = delayed arm).
struct DetectorConfig {
    int stages = 0;
    std::vector<Coupler> couplers;                // 2^stages - 1 entries
    std::vector<double> segment_transmissions;    // 2 * couplers.size()
    double detector_efficiency = 1.0;
    double dark_count_prob = 0.0;
    TimingSpec timing;

    int mode_count() const { return 1 << stages; }

    // Throws std::invalid_argument on out-of-range parameters or a tree
    // shape that does not close.
    void validate() const;

    // Balanced ideal: 50/50 couplers, loss spread uniformly so the product
    // of segment transmissions along any path equals total_transmission.
    static DetectorConfig balanced(int stages, double total_transmission = 1.0,
                                   double detector_efficiency = 1.0);
};

// Per-mode survival probabilities. q[i] is the probability that an input
// photon exits in temporal mode i, survives the fiber, and is detected;
// q_loss absorbs everything else. Sum is 1 by construction.
struct ModeProbabilities {
    std::vector<double> q;
    double q_loss = 0.0;

    int mode_count() const { return static_cast<int>(q.size()); }
    double survival() const;  // 1 - q_loss
    bool balanced(double tol = 1e-12) const;
};

ModeProbabilities build_mode_probabilities(const DetectorConfig& config);

struct TimingReport {
    bool feasible = false;
    bool gates_non_overlapping = false;
    double min_margin_ns = 0.0;
    std::vector<double> margins_ns;  // separation - dead_time, per pair
};

TimingReport validate_timing(const DetectorConfig& config);

}  // namespace pnrd
