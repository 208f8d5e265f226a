// File formats: JSON detector configs, CSV matrices / histograms /
// distributions / confidence tables, and per-trial record streams.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "pnrd/conditional_matrix.hpp"
#include "pnrd/detector_model.hpp"
#include "pnrd/simulator.hpp"

namespace pnrd {

DetectorConfig load_config(const std::string& path);
void save_config(const DetectorConfig& config, const std::string& path);
DetectorConfig config_from_json_text(const std::string& text);
std::string config_to_json_text(const DetectorConfig& config);

// CSV with a header row of n values and a leading k column.
void write_matrix_csv(const ConditionalMatrix& matrix, std::ostream& os);
void write_matrix_csv(const ConditionalMatrix& matrix, const std::string& path);

// Two columns: k,count.
void write_histogram_csv(const CountHistogram& hist, const std::string& path);
CountHistogram read_histogram_csv(const std::string& path);

// Three columns: n,probability,std_err (std_err may be empty).
void write_distribution_csv(const PhotonDistribution& dist,
                            const std::vector<double>& std_err, const std::string& path);
PhotonDistribution read_distribution_csv(const std::string& path);

// Rows l, one column per (eta, nbar) pair, matching the order given.
void write_confidence_csv(const std::vector<int>& ls, const std::vector<double>& etas,
                          const std::vector<double>& means,
                          const std::vector<std::vector<double>>& table,
                          const std::string& path);

// Line-oriented replay stream: trial index followed by the fired modes.
void write_click_records(const std::vector<ClickRecord>& records, const std::string& path);

}  // namespace pnrd
