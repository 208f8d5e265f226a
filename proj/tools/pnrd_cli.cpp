// Command line front end: build conditional matrices, simulate click data,
// reconstruct photon statistics, fit Poissonian means, and emit confidence
// tables as plot-ready CSV.
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pnrd/conditional_matrix.hpp"
#include "pnrd/detector_model.hpp"
#include "pnrd/io.hpp"
#include "pnrd/reconstruction.hpp"
#include "pnrd/simulator.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

using nlohmann::json;

void write_manifest(const std::string& command, const std::string& config_path,
                    std::uint64_t seed, const std::vector<std::string>& outputs) {
    if (outputs.empty() || outputs.front().empty()) return;
    json m;
    m["command"] = command;
    m["config"] = config_path;
    m["seed"] = seed;
    m["outputs"] = outputs;
    m["version"] = kVersion;
    std::ofstream f(outputs.front() + ".manifest.json");
    f << m.dump(2) << "\n";
}

pnrd::InputState parse_input_spec(const std::string& spec, int n_cut) {
    if (spec.rfind("poisson:", 0) == 0)
        return pnrd::InputState::poisson(std::stod(spec.substr(8)), n_cut);
    if (spec.rfind("fock:", 0) == 0)
        return pnrd::InputState::fock(std::stoi(spec.substr(5)));
    // otherwise a distribution CSV path
    const auto dist = pnrd::read_distribution_csv(spec);
    return pnrd::InputState::from_distribution(dist.rho);
}

std::vector<double> parse_list(const std::string& csv) {
    std::vector<double> out;
    std::istringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    return out;
}

void write_gnuplot_script(const std::string& data_csv, const std::string& path) {
    std::ofstream f(path);
    f << "set datafile separator ','\n"
      << "set style fill solid 0.5\n"
      << "set xlabel 'photon number n'\n"
      << "set ylabel 'probability'\n"
      << "plot '" << data_csv << "' skip 1 using 1:2:3 with boxerrorbars title 'reconstruction'\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Time-multiplexed photon-number-resolving detector toolkit"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    std::string config_path, out_path, input_spec = "poisson:1.0", method = "direct";
    std::string records_path, plot_script, hist_path;
    std::uint64_t seed = 1, trials = 10000;
    int n_max = 8, resamples = 1000, l_max = 3;
    double dark = -1.0, mean_max = -1.0;
    std::string means_csv = "0.25,0.5,1.0,1.5", etas_csv = "1.0,0.7,0.5";

    auto add_common = [&](CLI::App* cmd, bool needs_out) {
        cmd->add_option("--config", config_path, "detector config JSON")->required();
        auto* o = cmd->add_option("--out", out_path, "output CSV path");
        if (needs_out) o->required();
    };

    auto* c_matrix = app.add_subcommand("matrix", "export the conditional matrix p(k|n)");
    add_common(c_matrix, false);
    c_matrix->add_option("--n-max", n_max, "truncation order");

    auto* c_sim = app.add_subcommand("simulate", "generate a click histogram");
    add_common(c_sim, true);
    c_sim->add_option("--input", input_spec, "poisson:MEAN | fock:N | distribution CSV");
    c_sim->add_option("--trials", trials, "number of trials");
    c_sim->add_option("--seed", seed, "RNG seed");
    c_sim->add_option("--n-max", n_max, "input truncation order");
    c_sim->add_option("--dark-count-prob", dark, "override config dark count probability");
    c_sim->add_option("--records", records_path, "write per-trial click records here");

    auto* c_inv = app.add_subcommand("invert", "reconstruct the photon-number distribution");
    add_common(c_inv, true);
    c_inv->add_option("--hist", hist_path, "histogram CSV")->required();
    c_inv->add_option("--method", method, "direct | em")
        ->check(CLI::IsMember({"direct", "em"}));
    c_inv->add_option("--resamples", resamples, "bootstrap resamples for error bars");
    c_inv->add_option("--seed", seed, "bootstrap RNG seed");
    c_inv->add_option("--n-max", n_max, "truncation order");
    c_inv->add_option("--plot-script", plot_script, "also write a gnuplot script");

    auto* c_mle = app.add_subcommand("mle", "fit a Poissonian mean by maximum likelihood");
    add_common(c_mle, true);
    c_mle->add_option("--hist", hist_path, "histogram CSV")->required();
    c_mle->add_option("--n-max", n_max, "truncation order");
    c_mle->add_option("--mean-max", mean_max, "upper bound of the search interval");

    auto* c_conf = app.add_subcommand("confidence", "tabulate p(n=l | k=l)");
    add_common(c_conf, true);
    c_conf->add_option("--means", means_csv, "comma-separated Poissonian means");
    c_conf->add_option("--etas", etas_csv, "comma-separated survival probabilities");
    c_conf->add_option("--l-max", l_max, "tabulate l = 1..l_max");

    auto* c_timing = app.add_subcommand("timing", "check dead-time and gate feasibility");
    add_common(c_timing, false);

    CLI11_PARSE(app, argc, argv);

    try {
        const pnrd::DetectorConfig config = pnrd::load_config(config_path);
        const pnrd::ModeProbabilities modes = pnrd::build_mode_probabilities(config);

        if (c_matrix->parsed()) {
            const auto matrix = pnrd::build_matrix(modes, n_max);
            if (!out_path.empty()) pnrd::write_matrix_csv(matrix, out_path);
            else pnrd::write_matrix_csv(matrix, std::cout);
            std::cout << "column sums:";
            for (int n = 0; n <= matrix.n_max; ++n) {
                double s = 0.0;
                for (int k = 0; k <= matrix.n_modes; ++k) s += matrix.at(k, n);
                std::cout << " " << std::fixed << std::setprecision(6) << s;
            }
            std::cout << "\n";
            write_manifest("matrix", config_path, 0, {out_path});
        } else if (c_sim->parsed()) {
            const auto input = parse_input_spec(input_spec, n_max);
            const double dc = dark >= 0.0 ? dark : config.dark_count_prob;
            const auto result = pnrd::sample_clicks(modes, input, trials, seed, dc,
                                                    !records_path.empty());
            pnrd::write_histogram_csv(result.histogram, out_path);
            if (!records_path.empty()) pnrd::write_click_records(result.records, records_path);
            write_manifest("simulate", config_path, seed, {out_path, records_path});
            std::cout << "wrote " << result.histogram.total() << " trials to " << out_path
                      << "\n";
        } else if (c_inv->parsed()) {
            const auto matrix = pnrd::build_matrix(modes, n_max);
            const auto hist = pnrd::read_histogram_csv(hist_path);
            pnrd::PhotonDistribution dist;
            std::vector<double> err;
            if (method == "direct") {
                dist = pnrd::direct_invert(matrix, hist).distribution;
                err = pnrd::bootstrap_errors(matrix, hist, resamples, seed).std_dev;
            } else {
                const auto em = pnrd::em_reconstruct(matrix, hist);
                dist = em.distribution;
                std::cout << "em iterations: " << em.iterations
                          << (em.converged ? "" : " (not converged)") << "\n";
            }
            pnrd::write_distribution_csv(dist, err, out_path);
            if (!plot_script.empty()) write_gnuplot_script(out_path, plot_script);
            write_manifest("invert", config_path, seed, {out_path, plot_script});
        } else if (c_mle->parsed()) {
            const auto matrix = pnrd::build_matrix(modes, n_max);
            const auto hist = pnrd::read_histogram_csv(hist_path);
            const auto fit = pnrd::mle_poisson_mean(matrix, hist, mean_max);
            pnrd::write_distribution_csv(pnrd::mle_fitted_distribution(fit, n_max), {},
                                         out_path);
            std::cout << "fitted mean: " << std::setprecision(8) << fit.mean
                      << "  log-likelihood: " << fit.log_likelihood
                      << (fit.at_boundary ? "  (boundary)" : "") << "\n";
            write_manifest("mle", config_path, 0, {out_path});
        } else if (c_conf->parsed()) {
            const auto means = parse_list(means_csv);
            const auto etas = parse_list(etas_csv);
            if (l_max < 1 || l_max > modes.mode_count())
                throw std::invalid_argument("l range must lie in 1..mode_count");
            std::vector<int> ls;
            for (int l = 1; l <= l_max; ++l) ls.push_back(l);
            std::vector<std::vector<double>> table;
            for (int l : ls) {
                std::vector<double> row;
                for (double eta : etas)
                    for (double mean : means)
                        row.push_back(pnrd::confidence(modes, mean, eta, l));
                table.push_back(std::move(row));
            }
            pnrd::write_confidence_csv(ls, etas, means, table, out_path);
            write_manifest("confidence", config_path, 0, {out_path});
        } else if (c_timing->parsed()) {
            const auto report = pnrd::validate_timing(config);
            std::cout << "feasible: " << (report.feasible ? "yes" : "no")
                      << "\ngates non-overlapping: "
                      << (report.gates_non_overlapping ? "yes" : "no")
                      << "\nmin margin: " << report.min_margin_ns << " ns\n";
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return 0;
}
