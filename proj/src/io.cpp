#include "pnrd/io.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace pnrd {

namespace {

using nlohmann::json;

std::ifstream open_in(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot open " + path);
    return f;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::invalid_argument("cannot write " + path);
    f << std::setprecision(17);
    return f;
}

}  // namespace

DetectorConfig config_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config parse error: ") + e.what());
    }
    DetectorConfig cfg;
    try {
        cfg.stages = j.at("stages").get<int>();
        for (const auto& c : j.at("couplers"))
            cfg.couplers.push_back({c.at("ratio").get<double>()});
        for (const auto& s : j.at("segments"))
            cfg.segment_transmissions.push_back(s.at("transmission").get<double>());
        cfg.detector_efficiency = j.value("detector_efficiency", 1.0);
        cfg.dark_count_prob = j.value("dark_count_prob", 0.0);
        if (j.contains("timing")) {
            const auto& t = j.at("timing");
            cfg.timing.separations_ns = t.value("separations_ns", std::vector<double>{});
            cfg.timing.dead_time_ns = t.value("dead_time_ns", 0.0);
            cfg.timing.gate_width_ns = t.value("gate_width_ns", 0.0);
        }
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config field error: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

std::string config_to_json_text(const DetectorConfig& cfg) {
    json j;
    j["stages"] = cfg.stages;
    j["couplers"] = json::array();
    for (const auto& c : cfg.couplers) j["couplers"].push_back({{"ratio", c.ratio}});
    j["segments"] = json::array();
    for (double t : cfg.segment_transmissions) j["segments"].push_back({{"transmission", t}});
    j["detector_efficiency"] = cfg.detector_efficiency;
    j["dark_count_prob"] = cfg.dark_count_prob;
    j["timing"] = {{"separations_ns", cfg.timing.separations_ns},
                   {"dead_time_ns", cfg.timing.dead_time_ns},
                   {"gate_width_ns", cfg.timing.gate_width_ns}};
    return j.dump(2);
}

DetectorConfig load_config(const std::string& path) {
    auto f = open_in(path);
    std::stringstream ss;
    ss << f.rdbuf();
    return config_from_json_text(ss.str());
}

void save_config(const DetectorConfig& config, const std::string& path) {
    auto f = open_out(path);
    f << config_to_json_text(config) << "\n";
}

void write_matrix_csv(const ConditionalMatrix& matrix, std::ostream& os) {
    os << std::setprecision(17);
    os << "k";
    for (int n = 0; n <= matrix.n_max; ++n) os << "," << n;
    os << "\n";
    for (int k = 0; k <= matrix.n_modes; ++k) {
        os << k;
        for (int n = 0; n <= matrix.n_max; ++n) os << "," << matrix.p[k][n];
        os << "\n";
    }
}

void write_matrix_csv(const ConditionalMatrix& matrix, const std::string& path) {
    auto f = open_out(path);
    write_matrix_csv(matrix, f);
}

void write_histogram_csv(const CountHistogram& hist, const std::string& path) {
    auto f = open_out(path);
    f << "k,count\n";
    for (std::size_t k = 0; k < hist.counts.size(); ++k) f << k << "," << hist.counts[k] << "\n";
}

CountHistogram read_histogram_csv(const std::string& path) {
    auto f = open_in(path);
    CountHistogram hist;
    std::string line;
    bool first = true;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        if (first && line.rfind("k,", 0) == 0) {
            first = false;
            continue;
        }
        first = false;
        std::istringstream ls(line);
        std::string kf, cf;
        if (!std::getline(ls, kf, ',') || !std::getline(ls, cf, ','))
            throw std::invalid_argument("malformed histogram line: " + line);
        const std::size_t k = std::stoul(kf);
        if (hist.counts.size() <= k) hist.counts.resize(k + 1, 0);
        hist.counts[k] = std::stoull(cf);
    }
    if (hist.counts.empty()) throw std::invalid_argument("empty histogram file " + path);
    return hist;
}

void write_distribution_csv(const PhotonDistribution& dist,
                            const std::vector<double>& std_err, const std::string& path) {
    auto f = open_out(path);
    f << "n,probability,std_err\n";
    for (std::size_t n = 0; n < dist.rho.size(); ++n) {
        f << n << "," << dist.rho[n] << ",";
        if (n < std_err.size()) f << std_err[n];
        f << "\n";
    }
}

PhotonDistribution read_distribution_csv(const std::string& path) {
    auto f = open_in(path);
    PhotonDistribution dist;
    std::string line;
    bool first = true;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        if (first && line.rfind("n,", 0) == 0) {
            first = false;
            continue;
        }
        first = false;
        std::istringstream ls(line);
        std::string nf, pf;
        if (!std::getline(ls, nf, ',') || !std::getline(ls, pf, ','))
            throw std::invalid_argument("malformed distribution line: " + line);
        const std::size_t n = std::stoul(nf);
        if (dist.rho.size() <= n) dist.rho.resize(n + 1, 0.0);
        dist.rho[n] = std::stod(pf);
    }
    if (dist.rho.empty()) throw std::invalid_argument("empty distribution file " + path);
    for (double v : dist.rho)
        if (v < 0.0) dist.signed_values = true;
    return dist;
}

void write_confidence_csv(const std::vector<int>& ls, const std::vector<double>& etas,
                          const std::vector<double>& means,
                          const std::vector<std::vector<double>>& table,
                          const std::string& path) {
    auto f = open_out(path);
    f << "l";
    char label[64];
    for (double eta : etas)
        for (double mean : means) {
            std::snprintf(label, sizeof label, ",eta=%g;nbar=%g", eta, mean);
            f << label;
        }
    f << "\n";
    for (std::size_t i = 0; i < ls.size(); ++i) {
        f << ls[i];
        for (double v : table[i]) f << "," << v;
        f << "\n";
    }
}

void write_click_records(const std::vector<ClickRecord>& records, const std::string& path) {
    auto f = open_out(path);
    for (const auto& rec : records) {
        f << rec.trial;
        for (int m : rec.fired_modes) f << " " << m;
        f << "\n";
    }
}

}  // namespace pnrd
