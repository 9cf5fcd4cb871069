#pragma once

// Scenario configuration and the runners behind the `sqw` command-line tool.
// Runners return their CSV/SVG text; the caller decides where it goes.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "sqw/classical_walks.hpp"
#include "sqw/coined_walk.hpp"
#include "sqw/errors.hpp"
#include "sqw/gkls_walk.hpp"
#include "sqw/hopfield.hpp"
#include "sqw/hypercube.hpp"
#include "sqw/io.hpp"

namespace sqw {

inline constexpr std::size_t max_config_dimension = 6;

struct ScenarioConfig {
    std::size_t n = 0;
    std::vector<Pattern> sinks;
    std::optional<Pattern> initial;
    double kappa = 1.0;
    double gamma = 1.0;
    double t_max = 50.0;
    double dt = tol::default_dt;
    double sample_every = 0.05;
    std::string output;
    std::vector<std::tuple<Pattern, Pattern, double>> edge_weights;
    EquidistantRule equidistant = EquidistantRule::strict;
    ThresholdSense threshold_sense = ThresholdSense::standard;
    std::uint64_t seed = 0;

    // sweep
    std::vector<double> kappa_values{0.2, 0.65, 1.1, 1.55, 2.0};
    std::vector<double> gamma_values{0.2, 0.65, 1.1, 1.55, 2.0};
    double epsilon = default_mixing_epsilon;
    double sink_threshold = default_sink_threshold;
    unsigned threads = 0; // 0 = hardware concurrency

    // hopfield
    std::vector<Pattern> stored;
    std::vector<Pattern> inputs;
    std::vector<double> thresholds;
    UpdateOrder update_order = UpdateOrder::cyclic;
    std::size_t max_sweeps = 100;

    // classical (discrete chain)
    std::vector<std::vector<double>> matrix;
    std::vector<double> start;
    std::size_t steps = 20;

    bool svg = false;

    HypercubeSpec hypercube() const {
        HypercubeSpec spec;
        spec.n = n;
        spec.sinks = sinks;
        spec.equidistant = equidistant;
        for (const auto& [a, b, w] : edge_weights) spec.set_weight(a, b, w);
        spec.validate();
        return spec;
    }

    WalkParams walk_params() const { return {kappa, gamma, t_max, dt, sample_every}; }
};

namespace detail {

using nlohmann::json;

[[noreturn]] inline void field_error(const std::string& field, const std::string& what) {
    throw ConfigError("config field '" + field + "': " + what);
}

inline double get_real(const json& j, const std::string& field) {
    if (!j.is_number()) field_error(field, "expected a number");
    return j.get<double>();
}

inline std::vector<double> get_reals(const json& j, const std::string& field) {
    if (!j.is_array()) field_error(field, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(get_real(j[i], field + "[" + std::to_string(i) + "]"));
    return out;
}

inline Pattern get_pattern(const json& j, const std::string& field) {
    if (!j.is_string()) field_error(field, "expected a bit string such as \"101\"");
    try {
        return Pattern::parse(j.get<std::string>());
    } catch (const ConfigError& e) {
        field_error(field, e.what());
    }
}

inline std::vector<Pattern> get_patterns(const json& j, const std::string& field) {
    if (!j.is_array()) field_error(field, "expected an array of bit strings");
    std::vector<Pattern> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(get_pattern(j[i], field + "[" + std::to_string(i) + "]"));
    return out;
}

inline std::size_t get_count(const json& j, const std::string& field) {
    if (!j.is_number_integer() || j.get<long long>() < 0) field_error(field, "expected a non-negative integer");
    return j.get<std::size_t>();
}

} // namespace detail

/// Parses the flat JSON scenario file. Unknown keys are rejected.
inline ScenarioConfig parse_config(const std::string& text) {
    using nlohmann::json;
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");

    ScenarioConfig cfg;
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& k = it.key();
        const json& v = it.value();
        if (k == "N") cfg.n = detail::get_count(v, k);
        else if (k == "sinks") cfg.sinks = detail::get_patterns(v, k);
        else if (k == "initial") cfg.initial = detail::get_pattern(v, k);
        else if (k == "kappa") cfg.kappa = detail::get_real(v, k);
        else if (k == "gamma") cfg.gamma = detail::get_real(v, k);
        else if (k == "t_max") cfg.t_max = detail::get_real(v, k);
        else if (k == "dt") cfg.dt = detail::get_real(v, k);
        else if (k == "sample_every") cfg.sample_every = detail::get_real(v, k);
        else if (k == "output") {
            if (!v.is_string()) detail::field_error(k, "expected a file name");
            cfg.output = v.get<std::string>();
        } else if (k == "edge_weights") {
            if (!v.is_array()) detail::field_error(k, "expected an array of [pattern, pattern, weight] triples");
            for (std::size_t i = 0; i < v.size(); ++i) {
                const std::string f = k + "[" + std::to_string(i) + "]";
                if (!v[i].is_array() || v[i].size() != 3) detail::field_error(f, "expected [pattern, pattern, weight]");
                cfg.edge_weights.emplace_back(detail::get_pattern(v[i][0], f + "[0]"), detail::get_pattern(v[i][1], f + "[1]"),
                                              detail::get_real(v[i][2], f + "[2]"));
            }
        } else if (k == "equidistant_rule") {
            const auto s = v.is_string() ? v.get<std::string>() : std::string{};
            if (s == "strict") cfg.equidistant = EquidistantRule::strict;
            else if (s == "lte") cfg.equidistant = EquidistantRule::lte;
            else detail::field_error(k, "expected \"strict\" or \"lte\"");
        } else if (k == "threshold_sense") {
            const auto s = v.is_string() ? v.get<std::string>() : std::string{};
            if (s == "standard") cfg.threshold_sense = ThresholdSense::standard;
            else if (s == "as_printed") cfg.threshold_sense = ThresholdSense::as_printed;
            else detail::field_error(k, "expected \"standard\" or \"as_printed\"");
        } else if (k == "update_order") {
            const auto s = v.is_string() ? v.get<std::string>() : std::string{};
            if (s == "cyclic") cfg.update_order = UpdateOrder::cyclic;
            else if (s == "random") cfg.update_order = UpdateOrder::random;
            else detail::field_error(k, "expected \"cyclic\" or \"random\"");
        } else if (k == "seed") {
            if (!v.is_number_unsigned()) detail::field_error(k, "expected an unsigned integer");
            cfg.seed = v.get<std::uint64_t>();
        } else if (k == "kappa_values") cfg.kappa_values = detail::get_reals(v, k);
        else if (k == "gamma_values") cfg.gamma_values = detail::get_reals(v, k);
        else if (k == "epsilon") cfg.epsilon = detail::get_real(v, k);
        else if (k == "sink_threshold") cfg.sink_threshold = detail::get_real(v, k);
        else if (k == "threads") cfg.threads = static_cast<unsigned>(detail::get_count(v, k));
        else if (k == "stored") cfg.stored = detail::get_patterns(v, k);
        else if (k == "inputs") cfg.inputs = detail::get_patterns(v, k);
        else if (k == "thresholds") cfg.thresholds = detail::get_reals(v, k);
        else if (k == "max_sweeps") cfg.max_sweeps = detail::get_count(v, k);
        else if (k == "matrix") {
            if (!v.is_array()) detail::field_error(k, "expected an array of rows");
            cfg.matrix.clear();
            for (std::size_t i = 0; i < v.size(); ++i) cfg.matrix.push_back(detail::get_reals(v[i], k + "[" + std::to_string(i) + "]"));
        } else if (k == "start") cfg.start = detail::get_reals(v, k);
        else if (k == "steps") cfg.steps = detail::get_count(v, k);
        else if (k == "svg") {
            if (!v.is_boolean()) detail::field_error(k, "expected true or false");
            cfg.svg = v.get<bool>();
        } else {
            detail::field_error(k, "unknown key");
        }
    }
    return cfg;
}

inline ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

namespace detail {

inline void require_walk_fields(const ScenarioConfig& cfg) {
    if (cfg.n == 0) field_error("N", "required and must be >= 1");
    if (cfg.n > max_config_dimension) field_error("N", "at most " + std::to_string(max_config_dimension) + " qurons are supported");
    if (cfg.sinks.empty()) field_error("sinks", "at least one sink pattern is required");
    for (std::size_t i = 0; i < cfg.sinks.size(); ++i) {
        if (cfg.sinks[i].size() != cfg.n) field_error("sinks[" + std::to_string(i) + "]", "length differs from N");
    }
    if (!cfg.initial) field_error("initial", "required");
    if (cfg.initial->size() != cfg.n) field_error("initial", "length differs from N");
    for (std::size_t i = 0; i < cfg.edge_weights.size(); ++i) {
        const auto& [a, b, w] = cfg.edge_weights[i];
        if (a.size() != cfg.n || b.size() != cfg.n) field_error("edge_weights[" + std::to_string(i) + "]", "pattern length differs from N");
    }
    try {
        cfg.hypercube();
    } catch (const ConfigError& e) {
        field_error("sinks/edge_weights", e.what());
    }
}

inline void require_params(const WalkParams& p) {
    try {
        p.validate();
    } catch (const ConfigError& e) {
        field_error("kappa/gamma/t_max/dt/sample_every", e.what());
    }
}

inline std::vector<std::string> pattern_columns(std::size_t n) {
    std::vector<std::string> cols;
    for (Vertex v = 0; v < (Vertex{1} << n); ++v) cols.push_back("pattern_" + pattern_of(v, n).str());
    return cols;
}

} // namespace detail

struct SimulationOutput {
    Trajectory trajectory;
    std::string csv;
    std::string svg; // empty unless requested
};

inline std::string trajectory_csv(const Trajectory& traj) {
    auto header = detail::pattern_columns(traj.n);
    header.insert(header.begin(), "t");
    header.insert(header.end(), {"trace_drift", "min_eig", "purity"});
    io::CsvWriter csv(header);
    for (std::size_t s = 0; s < traj.size(); ++s) {
        std::vector<std::string> row{io::format_real(traj.times[s])};
        for (double p : traj.populations[s]) row.push_back(io::format_real(p));
        row.push_back(io::format_real(traj.trace_drift[s]));
        row.push_back(io::format_real(traj.min_eigenvalue[s]));
        row.push_back(io::format_real(traj.purity[s]));
        csv.row(row);
    }
    return csv.str();
}

inline std::string trajectory_svg(const Trajectory& traj, const std::string& title) {
    std::vector<io::Series> series;
    for (Vertex v = 0; v < (Vertex{1} << traj.n); ++v) {
        io::Series s{pattern_of(v, traj.n).str(), {}};
        for (const auto& p : traj.populations) s.y.push_back(p[v]);
        series.push_back(std::move(s));
    }
    return io::line_chart_svg(traj.times, series, title, "t [1/gamma]", "probability");
}

inline SimulationOutput run_simulate(const ScenarioConfig& cfg) {
    detail::require_walk_fields(cfg);
    const WalkParams params = cfg.walk_params();
    detail::require_params(params);
    const HypercubeSpec spec = cfg.hypercube();
    const auto rho0 = DensityMatrix::basis_state(spec.dimension(), vertex_index(*cfg.initial));

    SimulationOutput out{evolve(rho0, spec, params), {}, {}};
    out.csv = trajectory_csv(out.trajectory);
    if (cfg.svg) {
        std::string title = "N=" + std::to_string(cfg.n) + ", sinks";
        for (const auto& s : cfg.sinks) title += " " + s.str();
        title += ", kappa=" + io::format_real(cfg.kappa) + ", gamma=" + io::format_real(cfg.gamma);
        out.svg = trajectory_svg(out.trajectory, title);
    }
    return out;
}

struct SweepPoint {
    double kappa = 0.0;
    double gamma = 0.0;
    double mixing_time = 0.0; // 0: walk did not retrieve; -1: evaluation failed
    std::string status;       // "ok", "not_retrieved" or "failed: ..."
};

struct SweepOutput {
    std::vector<SweepPoint> points; // sorted by (gamma, kappa)
    std::string csv;
    std::string svg;
};

inline SweepPoint evaluate_sweep_point(const ScenarioConfig& cfg, const HypercubeSpec& spec, double kappa, double gamma) {
    SweepPoint pt{kappa, gamma, 0.0, "ok"};
    try {
        WalkParams params = cfg.walk_params();
        params.kappa = kappa;
        params.gamma = gamma;
        params.validate();
        const auto rho0 = DensityMatrix::basis_state(spec.dimension(), vertex_index(*cfg.initial));
        const Trajectory traj = evolve(rho0, spec, params);
        pt.mixing_time = mixing_time(traj, cfg.epsilon, cfg.sink_threshold);
        if (pt.mixing_time == 0.0 && traj.sink_population(traj.size() - 1) < cfg.sink_threshold) pt.status = "not_retrieved";
    } catch (const std::exception& e) {
        pt.mixing_time = -1.0;
        pt.status = std::string("failed: ") + e.what();
    }
    return pt;
}

inline std::string csv_cell(std::string s) {
    std::replace(s.begin(), s.end(), ',', ';');
    std::replace(s.begin(), s.end(), '\n', ' ');
    return s;
}

inline SweepOutput run_sweep(const ScenarioConfig& cfg) {
    detail::require_walk_fields(cfg);
    if (cfg.kappa_values.empty()) detail::field_error("kappa_values", "grid must not be empty");
    if (cfg.gamma_values.empty()) detail::field_error("gamma_values", "grid must not be empty");
    for (double k : cfg.kappa_values)
        if (!(k >= 0.0)) detail::field_error("kappa_values", "values must be >= 0");
    for (double g : cfg.gamma_values)
        if (!(g >= 0.0)) detail::field_error("gamma_values", "values must be >= 0");
    const HypercubeSpec spec = cfg.hypercube();

    std::vector<double> kappas = cfg.kappa_values;
    std::vector<double> gammas = cfg.gamma_values;
    std::sort(kappas.begin(), kappas.end());
    kappas.erase(std::unique(kappas.begin(), kappas.end()), kappas.end());
    std::sort(gammas.begin(), gammas.end());
    gammas.erase(std::unique(gammas.begin(), gammas.end()), gammas.end());

    SweepOutput out;
    out.points.resize(kappas.size() * gammas.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t idx = next++; idx < out.points.size(); idx = next++) {
            const double g = gammas[idx / kappas.size()];
            const double k = kappas[idx % kappas.size()];
            out.points[idx] = evaluate_sweep_point(cfg, spec, k, g);
        }
    };
    unsigned workers = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, out.points.size()));
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    io::CsvWriter csv({"kappa", "gamma", "mixing_time", "status"});
    for (const auto& p : out.points) {
        csv.row({io::format_real(p.kappa), io::format_real(p.gamma), io::format_real(p.mixing_time), csv_cell(p.status)});
    }
    out.csv = csv.str();

    if (cfg.svg) {
        std::vector<std::vector<double>> grid(gammas.size(), std::vector<double>(kappas.size()));
        for (std::size_t idx = 0; idx < out.points.size(); ++idx) grid[idx / kappas.size()][idx % kappas.size()] = out.points[idx].mixing_time;
        out.svg = io::heat_map_svg(kappas, gammas, grid, "mixing time T_M [1/gamma]", "kappa", "gamma");
    }
    return out;
}

struct CoinCheckRow {
    double p = 0.0;
    std::string kind;
    double deviation = 0.0;
    bool unitary = false;
};

inline std::vector<double> default_coin_grid() {
    std::vector<double> g;
    for (int k = 0; k <= 20; ++k) g.push_back(k / 20.0);
    return g;
}

inline std::vector<CoinCheckRow> coin_check(const std::vector<double>& grid) {
    std::vector<CoinCheckRow> rows;
    for (double p : grid) {
        if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("coin-check: p = " + io::format_real(p) + " outside [0, 1]");
        const auto n = is_unitary(neuron_coin(p));
        rows.push_back({p, "neuron", n.deviation, n.unitary});
        const auto b = is_unitary(biased_coin(p));
        rows.push_back({p, "biased", b.deviation, b.unitary});
    }
    return rows;
}

inline std::string run_coin_check(const std::vector<double>& grid) {
    io::CsvWriter csv({"p", "kind", "deviation", "unitary"});
    for (const auto& r : coin_check(grid)) {
        csv.row({io::format_real(r.p), r.kind, io::format_real(r.deviation), r.unitary ? "true" : "false"});
    }
    return csv.str();
}

struct HopfieldRow {
    Pattern input;
    AsyncRun run;
};

struct HopfieldOutput {
    std::vector<HopfieldRow> rows;
    std::string csv;
};

/// Every stored pattern plus each of its single-bit corruptions.
inline std::vector<Pattern> hamming_ball_inputs(const std::vector<Pattern>& stored) {
    std::set<Pattern> seen;
    std::vector<Pattern> out;
    for (const auto& p : stored) {
        if (seen.insert(p).second) out.push_back(p);
        for (std::size_t i = 0; i < p.size(); ++i) {
            auto q = p.flipped(i);
            if (seen.insert(q).second) out.push_back(q);
        }
    }
    return out;
}

inline HopfieldOutput run_hopfield(const ScenarioConfig& cfg) {
    if (cfg.stored.empty()) detail::field_error("stored", "at least one pattern to store is required");
    const std::size_t n = cfg.stored.front().size();
    if (cfg.n != 0 && cfg.n != n) detail::field_error("N", "differs from the stored pattern length");
    for (std::size_t i = 0; i < cfg.stored.size(); ++i)
        if (cfg.stored[i].size() != n) detail::field_error("stored[" + std::to_string(i) + "]", "length differs from stored[0]");
    for (std::size_t i = 0; i < cfg.inputs.size(); ++i)
        if (cfg.inputs[i].size() != n) detail::field_error("inputs[" + std::to_string(i) + "]", "length differs from the stored patterns");
    if (!cfg.thresholds.empty() && cfg.thresholds.size() != n) detail::field_error("thresholds", "expected one value per neuron");

    const WeightMatrix w = hebbian_store(cfg.stored);
    const Thresholds theta = cfg.thresholds.empty() ? Thresholds::zeros(n) : Thresholds(cfg.thresholds);
    const AsyncOptions opts{cfg.update_order, cfg.max_sweeps, cfg.seed, cfg.threshold_sense};
    const auto inputs = cfg.inputs.empty() ? hamming_ball_inputs(cfg.stored) : cfg.inputs;

    HopfieldOutput out;
    io::CsvWriter csv({"input", "output", "steps", "converged", "energy_trace"});
    for (const auto& in : inputs) {
        HopfieldRow row{in, run_async(in, w, theta, opts)};
        std::string trace;
        for (std::size_t k = 0; k < row.run.energies.size(); ++k) {
            if (k) trace += ';';
            trace += io::format_real(row.run.energies[k]);
        }
        csv.row({in.str(), row.run.final_state().str(), std::to_string(row.run.flips), row.run.converged ? "true" : "false",
                 trace});
        out.rows.push_back(std::move(row));
    }
    out.csv = csv.str();
    return out;
}

struct ClassicalOutput {
    std::string csv;
    std::string stationary_csv; // discrete chains only
};

/// Discrete chain when `matrix` is given, otherwise the continuous-time
/// chain on the hypercube driven by the jump operators at unit rate.
inline ClassicalOutput run_classical(const ScenarioConfig& cfg) {
    ClassicalOutput out;
    if (!cfg.matrix.empty()) {
        StochasticMatrix m;
        try {
            m = StochasticMatrix(cfg.matrix);
        } catch (const ConfigError& e) {
            detail::field_error("matrix", e.what());
        }
        ProbabilityVector pi;
        try {
            pi = cfg.start.empty() ? ProbabilityVector::delta(m.size(), 0) : ProbabilityVector(cfg.start);
        } catch (const ConfigError& e) {
            detail::field_error("start", e.what());
        }
        if (pi.size() != m.size()) detail::field_error("start", "length differs from the matrix size");

        std::vector<std::string> header{"step"};
        for (std::size_t i = 0; i < m.size(); ++i) header.push_back("p" + std::to_string(i));
        io::CsvWriter csv(header);
        for (std::size_t s = 0; s <= cfg.steps; ++s) {
            std::vector<std::string> row{std::to_string(s)};
            for (double x : pi.values()) row.push_back(io::format_real(x));
            csv.row(row);
            if (s < cfg.steps) pi = step(m, pi);
        }
        out.csv = csv.str();

        const auto st = stationary(m);
        io::CsvWriter sc({"state", "probability", "converged", "unique"});
        for (std::size_t i = 0; i < m.size(); ++i) {
            sc.row({std::to_string(i), io::format_real(st.distribution[i]), st.converged ? "true" : "false",
                    st.unique ? "true" : "false"});
        }
        out.stationary_csv = sc.str();
        return out;
    }

    detail::require_walk_fields(cfg);
    const WalkParams params = cfg.walk_params();
    detail::require_params(params);
    const HypercubeSpec spec = cfg.hypercube();
    std::vector<std::pair<std::size_t, std::size_t>> moves;
    for (const auto& op : build_jump_operators(spec)) moves.emplace_back(op.from, op.to);
    const RateMatrix q = generator_from_transitions(spec.dimension(), moves);
    const auto pi0 = ProbabilityVector::delta(spec.dimension(), vertex_index(*cfg.initial));

    auto header = detail::pattern_columns(cfg.n);
    header.insert(header.begin(), "t");
    io::CsvWriter csv(header);
    const ComplexMatrix hop = ctmc_propagator(q, params.sample_every);
    ProbabilityVector pi = pi0;
    for (std::size_t s = 0; s < params.sample_count(); ++s) {
        if (s > 0) pi = propagate(hop, pi);
        std::vector<std::string> row{io::format_real(static_cast<double>(s) * params.sample_every)};
        for (double x : pi.values()) row.push_back(io::format_real(x));
        csv.row(row);
    }
    out.csv = csv.str();
    return out;
}

} // namespace sqw
