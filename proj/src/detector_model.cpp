#include "pnrd/detector_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace pnrd {

namespace {

void check_unit_interval(double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0))
        throw std::invalid_argument(std::string(name) + " must lie in [0,1], got " +
                                    std::to_string(v));
}

}  // namespace

void DetectorConfig::validate() const {
    if (stages < 1) throw std::invalid_argument("stages must be >= 1");
    const std::size_t want_couplers = (std::size_t(1) << stages) - 1;
    if (couplers.size() != want_couplers)
        throw std::invalid_argument("tree shape not closed: expected " +
                                    std::to_string(want_couplers) + " couplers, got " +
                                    std::to_string(couplers.size()));
    if (segment_transmissions.size() != 2 * couplers.size())
        throw std::invalid_argument("tree shape not closed: expected " +
                                    std::to_string(2 * couplers.size()) + " segments, got " +
                                    std::to_string(segment_transmissions.size()));
    for (const auto& c : couplers) check_unit_interval(c.ratio, "coupler ratio");
    for (double t : segment_transmissions) check_unit_interval(t, "segment transmission");
    check_unit_interval(detector_efficiency, "detector_efficiency");
    check_unit_interval(dark_count_prob, "dark_count_prob");
    for (double s : timing.separations_ns)
        if (s <= 0.0) throw std::invalid_argument("bin separations must be positive");
    if (timing.dead_time_ns < 0.0 || timing.gate_width_ns < 0.0)
        throw std::invalid_argument("timing values must be non-negative");
}

DetectorConfig DetectorConfig::balanced(int stages, double total_transmission,
                                        double detector_efficiency) {
    if (stages < 1) throw std::invalid_argument("stages must be >= 1");
    check_unit_interval(total_transmission, "total_transmission");
    DetectorConfig cfg;
    cfg.stages = stages;
    cfg.couplers.assign((std::size_t(1) << stages) - 1, Coupler{0.5});
    // every root-to-leaf path crosses `stages` segments
    const double per_segment = std::pow(total_transmission, 1.0 / stages);
    cfg.segment_transmissions.assign(2 * cfg.couplers.size(), per_segment);
    cfg.detector_efficiency = detector_efficiency;
    return cfg;
}

double ModeProbabilities::survival() const { return 1.0 - q_loss; }

bool ModeProbabilities::balanced(double tol) const {
    if (q.empty()) return true;
    const auto [lo, hi] = std::minmax_element(q.begin(), q.end());
    return *hi - *lo <= tol;
}

ModeProbabilities build_mode_probabilities(const DetectorConfig& config) {
    config.validate();
    const int S = config.stages;
    const int N = config.mode_count();
    ModeProbabilities modes;
    modes.q.assign(N, 0.0);
    for (int i = 0; i < N; ++i) {
        double p = config.detector_efficiency;
        std::size_t node = 0;
        for (int d = 0; d < S; ++d) {
            const int bit = (i >> (S - 1 - d)) & 1;  // 1 = delayed arm
            const double r = config.couplers[node].ratio;
            p *= bit ? r : 1.0 - r;
            p *= config.segment_transmissions[2 * node + bit];
            node = 2 * node + 1 + bit;
        }
        modes.q[i] = p;
    }
    modes.q_loss = 1.0 - std::accumulate(modes.q.begin(), modes.q.end(), 0.0);
    if (modes.q_loss < 0.0) modes.q_loss = 0.0;  // clamp rounding noise
    return modes;
}

TimingReport validate_timing(const DetectorConfig& config) {
    const TimingSpec& t = config.timing;
    TimingReport report;
    report.margins_ns.reserve(t.separations_ns.size());
    double min_sep = t.separations_ns.empty()
                         ? 0.0
                         : *std::min_element(t.separations_ns.begin(), t.separations_ns.end());
    for (double s : t.separations_ns) report.margins_ns.push_back(s - t.dead_time_ns);
    report.min_margin_ns = t.separations_ns.empty()
                               ? 0.0
                               : *std::min_element(report.margins_ns.begin(),
                                                   report.margins_ns.end());
    report.gates_non_overlapping = t.separations_ns.empty() || t.gate_width_ns <= min_sep;
    report.feasible = !t.separations_ns.empty() && report.min_margin_ns > 0.0 &&
                      report.gates_non_overlapping;
    return report;
}

}  // namespace pnrd
