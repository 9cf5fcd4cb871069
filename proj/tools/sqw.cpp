// sqw: command-line front end for the stochastic quantum walk simulator.
//
//   sqw simulate <config>     density-matrix trajectory CSV (+ SVG)
//   sqw sweep <config>        mixing time over a (kappa, gamma) grid
//   sqw coin-check            unitarity of the neuron and biased coins
//   sqw hopfield <config>     classical Hopfield retrieval baseline
//   sqw classical <config>    discrete Markov chain or kappa = 0 oracle
//
// Exit codes: 0 success, 2 configuration error, 3 numerical diagnostics.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sqw/experiments.hpp"

namespace {

constexpr int exit_config = 2;
constexpr int exit_numerics = 3;

struct CommonFlags {
    std::string out_dir = ".";
    bool svg = false;
    std::optional<std::uint64_t> seed;
    std::optional<double> dt;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--out", flags.out_dir, "Output directory");
    cmd->add_flag("--svg", flags.svg, "Also write an SVG plot");
    cmd->add_option("--seed", flags.seed, "Random seed (overrides the config)");
    cmd->add_option("--dt", flags.dt, "Integrator step in 1/gamma units (overrides the config)");
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw sqw::ConfigError("cannot write '" + path.string() + "'");
    out << text;
    std::cout << "wrote " << path.string() << '\n';
}

sqw::ScenarioConfig load(const std::string& path, const CommonFlags& flags) {
    auto cfg = sqw::load_config(path);
    if (flags.seed) cfg.seed = *flags.seed;
    if (flags.dt) cfg.dt = *flags.dt;
    cfg.svg = cfg.svg || flags.svg;
    return cfg;
}

std::filesystem::path output_path(const CommonFlags& flags, const sqw::ScenarioConfig& cfg, const std::string& fallback) {
    return std::filesystem::path(flags.out_dir) / (cfg.output.empty() ? fallback : cfg.output);
}

std::filesystem::path with_extension(std::filesystem::path p, const std::string& ext) {
    p.replace_extension(ext);
    return p;
}

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> grid;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            grid.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw sqw::ConfigError("--grid: '" + item + "' is not a number");
        }
    }
    if (grid.empty()) throw sqw::ConfigError("--grid: no values");
    return grid;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stochastic quantum walks on firing-pattern hypercubes"};
    app.require_subcommand(1);

    CommonFlags flags;
    std::string config_path;
    std::string grid_text;

    auto* simulate = app.add_subcommand("simulate", "Evolve the density matrix and write its populations");
    simulate->add_option("config", config_path, "Scenario JSON file")->required();
    add_common(simulate, flags);

    auto* sweep = app.add_subcommand("sweep", "Mixing time over a (kappa, gamma) grid");
    sweep->add_option("config", config_path, "Scenario JSON file")->required();
    add_common(sweep, flags);

    auto* coin = app.add_subcommand("coin-check", "Unitarity of the neuron and biased coins");
    coin->add_option("--grid", grid_text, "Comma-separated p values (default 0, 0.05, ..., 1)");
    add_common(coin, flags);

    auto* hopfield = app.add_subcommand("hopfield", "Classical Hopfield retrieval baseline");
    hopfield->add_option("config", config_path, "Scenario JSON file")->required();
    add_common(hopfield, flags);

    auto* classical = app.add_subcommand("classical", "Classical Markov chain runs");
    classical->add_option("config", config_path, "Scenario JSON file")->required();
    add_common(classical, flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_config;
    }

    try {
        if (*simulate) {
            const auto cfg = load(config_path, flags);
            const auto out = sqw::run_simulate(cfg);
            const auto path = output_path(flags, cfg, "trajectory.csv");
            write_file(path, out.csv);
            if (!out.svg.empty()) write_file(with_extension(path, ".svg"), out.svg);
        } else if (*sweep) {
            const auto cfg = load(config_path, flags);
            const auto out = sqw::run_sweep(cfg);
            const auto path = output_path(flags, cfg, "sweep.csv");
            write_file(path, out.csv);
            if (!out.svg.empty()) write_file(with_extension(path, ".svg"), out.svg);
        } else if (*coin) {
            const auto grid = grid_text.empty() ? sqw::default_coin_grid() : parse_grid(grid_text);
            write_file(std::filesystem::path(flags.out_dir) / "coin_check.csv", sqw::run_coin_check(grid));
        } else if (*hopfield) {
            const auto cfg = load(config_path, flags);
            const auto out = sqw::run_hopfield(cfg);
            write_file(output_path(flags, cfg, "hopfield.csv"), out.csv);
        } else if (*classical) {
            const auto cfg = load(config_path, flags);
            const auto out = sqw::run_classical(cfg);
            const auto path = output_path(flags, cfg, "classical.csv");
            write_file(path, out.csv);
            if (!out.stationary_csv.empty()) {
                auto st = path;
                st.replace_filename(path.stem().string() + "_stationary.csv");
                write_file(st, out.stationary_csv);
            }
        }
    } catch (const sqw::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config;
    } catch (const sqw::DiagnosticsError& e) {
        std::cerr << "numerical diagnostics: " << e.what() << '\n';
        return exit_numerics;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
